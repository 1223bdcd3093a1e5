#ifndef BESSELEXP_SPECIAL_FUNCTIONS_HPP
#define BESSELEXP_SPECIAL_FUNCTIONS_HPP

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "besselexp/errors.hpp"

namespace besselexp {

/// log I0(kappa) together with the mean resultant function r = I1/I0.
struct BesselEval {
  double log_i0 = 0.0;
  double ratio = 0.0;
};

namespace detail {

inline std::string describe(const char* what, double x) {
  std::ostringstream os;
  os.precision(17);
  os << what << ": argument " << x << " is outside the domain";
  return os.str();
}

// Below this point the ascending series is used; above it the Hankel
// asymptotic expansion. Smallest asymptotic term at 15 is about 1.4e-14.
inline constexpr double kBesselSeriesLimit = 15.0;

inline BesselEval bessel_series(double kappa) {
  const double q = 0.25 * kappa * kappa;
  // I0 = 1 + tail, tail = sum_{k>=1} q^k / (k!)^2
  double t0 = 1.0;
  double tail = 0.0;
  // I1 = (kappa/2) * sum_{k>=0} q^k / (k! (k+1)!)
  double t1 = 1.0;
  double s1 = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double dk = k;
    t0 *= q / (dk * dk);
    t1 *= q / (dk * (dk + 1.0));
    tail += t0;
    s1 += t1;
    if (t0 <= 1e-17 * (1.0 + tail) && t1 <= 1e-17 * s1) break;
  }
  return {std::log1p(tail), 0.5 * kappa * s1 / (1.0 + tail)};
}

inline BesselEval bessel_asymptotic(double kappa) {
  // I_nu(z) ~ e^z / sqrt(2 pi z) * sum_k c_k(nu), with
  // c_k = c_{k-1} * ((2k-1)^2 - 4 nu^2) / (8 k z).
  double c0 = 1.0;
  double c1 = 1.0;
  double s0 = 1.0;
  double s1 = 1.0;
  const double inv8z = 1.0 / (8.0 * kappa);
  for (int k = 1; k < 64; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double n0 = c0 * odd * odd * inv8z / k;
    const double n1 = c1 * (odd * odd - 4.0) * inv8z / k;
    if (std::abs(n0) >= std::abs(c0)) break;  // series has started to diverge
    c0 = n0;
    c1 = n1;
    s0 += c0;
    s1 += c1;
    if (std::abs(c0) < 1e-17 * s0 && std::abs(c1) < 1e-17 * s1) break;
  }
  const double log_i0 =
      kappa - 0.5 * std::log(2.0 * std::numbers::pi * kappa) + std::log(s0);
  return {log_i0, s1 / s0};
}

}  // namespace detail

/// Evaluates log I0(kappa) and I1(kappa)/I0(kappa) without forming I0 itself,
/// so arguments far beyond the exp() overflow threshold are fine.
///
/// Throws DomainError for negative or non-finite kappa.
inline BesselEval bessel_eval(double kappa) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa)) {
    throw DomainError(detail::describe("bessel_eval", kappa));
  }
  if (kappa == 0.0) return {0.0, 0.0};
  if (kappa <= detail::kBesselSeriesLimit) return detail::bessel_series(kappa);
  return detail::bessel_asymptotic(kappa);
}

/// log I0(kappa); convenience wrapper over bessel_eval.
inline double log_bessel_i0(double kappa) { return bessel_eval(kappa).log_i0; }

/// Ratio I1(kappa)/I0(kappa).
inline double bessel_ratio(double kappa) { return bessel_eval(kappa).ratio; }

namespace detail {

inline constexpr double kBranchPoint = -1.0 / std::numbers::e;
inline constexpr double kBranchSlack = 1e-14;

inline double check_lambert_arg(const char* what, double t) {
  if (std::isnan(t) || t < kBranchPoint - kBranchSlack) {
    throw DomainError(describe(what, t));
  }
  return t < kBranchPoint ? kBranchPoint : t;
}

// Branch-point approximation (valid on [-1/e, 0], usable slightly beyond).
inline double winitzki_branch(double t) {
  constexpr double e = std::numbers::e;
  if (t <= kBranchPoint) return -1.0;
  const double bracket =
      1.0 / std::sqrt(2.0 * e * t + 2.0) + 1.0 / (e - 1.0) - 1.0 / std::numbers::sqrt2;
  return e * t / (1.0 + 1.0 / bracket);
}

// Global approximation for t >= 0.
inline double winitzki_positive(double t) {
  const double l = std::log1p(t);
  return l * (1.0 - std::log1p(l) / (2.0 + l));
}

}  // namespace detail

/// Principal-branch Lambert W approximation W0(t) ~ e t / (1 + 1/b) with
/// b = (2et + 2)^(-1/2) + 1/(e - 1) - 1/sqrt(2).
///
/// Intended for t in [-1/e, 0], which is the only range the envelope tuner
/// uses; there the absolute error against lambert_w0 is below 2.7e-3
/// (measured on a 10^4-point grid, see tests). The expression has a pole
/// near t = 11.4 and should not be used for large positive t.
inline double lambert_w0_winitzki(double t) {
  t = detail::check_lambert_arg("lambert_w0_winitzki", t);
  return detail::winitzki_branch(t);
}

/// Principal branch of the Lambert W function, w e^w = t with w >= -1.
///
/// Halley iteration seeded by a Winitzki approximation. Arguments within
/// 1e-14 below -1/e are treated as the branch point.
inline double lambert_w0(double t) {
  t = detail::check_lambert_arg("lambert_w0", t);
  if (t == detail::kBranchPoint) return -1.0;
  if (t == 0.0) return 0.0;
  if (std::isinf(t)) return t;

  double w = t < 0.0 ? detail::winitzki_branch(t) : detail::winitzki_positive(t);
  if (w <= -1.0) w = -1.0 + 1e-8;
  for (int it = 0; it < 20; ++it) {
    const double ew = std::exp(w);
    const double f = w * ew - t;
    const double wp1 = w + 1.0;
    if (f == 0.0 || wp1 == 0.0) break;
    const double step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
    double next = w - step;
    if (next <= -1.0) next = 0.5 * (w - 1.0);  // keep iterates on the principal branch
    const bool done = std::abs(next - w) <= 1e-15 * (1.0 + std::abs(next));
    w = next;
    if (done) break;
  }
  return w;
}

/// log Gamma(x) for x > 0.
inline double log_gamma_fn(double x) {
  if (!(x > 0.0)) throw DomainError(detail::describe("log_gamma_fn", x));
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);  // reentrant; std::lgamma writes signgam
#else
  return std::lgamma(x);
#endif
}

/// Digamma Psi(x) = d/dx log Gamma(x) for x > 0.
inline double digamma(double x) {
  if (!(x > 0.0) || !std::isfinite(x)) {
    throw DomainError(detail::describe("digamma", x));
  }
  double shift = 0.0;
  while (x < 10.0) {
    shift -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Bernoulli-number asymptotic series.
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 -
                              inv2 * (1.0 / 240 -
                                      inv2 * (1.0 / 132 -
                                              inv2 * (691.0 / 32760 - inv2 / 12.0))))));
  return shift + std::log(x) - 0.5 * inv - series;
}

}  // namespace besselexp

#endif  // BESSELEXP_SPECIAL_FUNCTIONS_HPP
