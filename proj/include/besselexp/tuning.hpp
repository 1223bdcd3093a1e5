#ifndef BESSELEXP_TUNING_HPP
#define BESSELEXP_TUNING_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "besselexp/errors.hpp"
#include "besselexp/quadrature.hpp"
#include "besselexp/special_functions.hpp"

namespace besselexp {

/// Target density p(kappa) ∝ I0(kappa)^(-eta) exp(-eta beta0 kappa), kappa >= 0.
/// Normalizable exactly when eta > 0 and beta0 > -1.
struct PosteriorParams {
  double eta = 1.0;
  double beta0 = 0.0;
};

inline void validate(const PosteriorParams& post) {
  if (!(post.eta > 0.0) || !std::isfinite(post.eta)) {
    std::ostringstream os;
    os << "posterior requires eta > 0 (got " << post.eta << ")";
    throw DomainError(os.str());
  }
  if (!(post.beta0 > -1.0) || !std::isfinite(post.beta0)) {
    std::ostringstream os;
    os << "posterior requires beta0 > -1 (got " << post.beta0 << "); the density diverges";
    throw DomainError(os.str());
  }
}

enum class LambertMode { exact, winitzki };

/// Shifted-gamma proposal: x ~ Gamma(eta*alpha + 1, rate eta*beta), kappa = x - epsilon.
/// The cached g values define the acceptance threshold.
struct Envelope {
  double alpha = 0.0;
  double beta = 1.0;
  double epsilon = 0.0;
  double kappa0 = 0.0;
  double log_i0_kappa0 = 0.0;
  double r_kappa0 = 0.0;
  double g_at_kappa0 = 0.0;
  double g_at_zero = 0.0;

  /// max(g(kappa0), g(0)). Equal to g(kappa0) up to rounding when epsilon
  /// comes from the exact Lambert W; with the Winitzki approximation g(0)
  /// may exceed g(kappa0) slightly and the max keeps the sampler exact.
  [[nodiscard]] double threshold() const { return std::max(g_at_kappa0, g_at_zero); }
  [[nodiscard]] double guard() const { return std::max(0.0, g_at_zero - g_at_kappa0); }
  [[nodiscard]] double proposal_shape(const PosteriorParams& post) const { return post.eta * alpha + 1.0; }
  [[nodiscard]] double proposal_rate(const PosteriorParams& post) const { return post.eta * beta; }
};

namespace detail {

inline double g_terms(double slope, double alpha, double epsilon, double kappa, double log_i0) {
  double log_term = 0.0;
  if (alpha != 0.0) {
    const double shifted = kappa + epsilon;
    log_term = shifted > 0.0 ? alpha * std::log(shifted) : -std::numeric_limits<double>::infinity();
  }
  return slope * kappa - log_term - log_i0;
}

}  // namespace detail

/// g(kappa) = (beta - beta0) kappa - alpha log(kappa + epsilon) - log I0(kappa).
/// With alpha > 0 and kappa + epsilon == 0 the log term diverges and the
/// result is +inf.
inline double g_value(const PosteriorParams& post, const Envelope& env, double kappa) {
  if (!(kappa >= 0.0)) throw DomainError(detail::describe("g_value", kappa));
  return detail::g_terms(env.beta - post.beta0, env.alpha, env.epsilon, kappa, log_bessel_i0(kappa));
}

/// Lower/upper bounds on the boundary optimum kappa_a and the interpolated
/// starting point used by the fast tuner.
struct KappaBracket {
  double lower = 0.0;
  double upper = 0.0;
  double interpolated = 0.0;
};

inline KappaBracket kappa_bracket(const PosteriorParams& post) {
  validate(post);
  const double eta = post.eta;
  const double b0 = post.beta0;
  KappaBracket k;
  k.lower = 2.0 / (eta * b0 + std::sqrt(2.0 * eta + eta * eta * b0 * b0));
  k.upper = (2.0 + 1.0 / eta) / ((eta + 1.0) * b0 + std::sqrt(2.0 * eta + 1.0 + eta * eta * b0 * b0));
  const double c1 = 0.5 + (1.0 - 1.0 / (2.0 * eta)) / (2.0 * eta);
  k.interpolated = (1.0 - c1) * k.lower + c1 * k.upper;
  return k;
}

/// Completes an envelope from (kappa0, beta): epsilon solves g(0) = g(kappa0)
/// through W0(c3 exp(c3)) and alpha forces g'(kappa0) = 0.
inline Envelope envelope_from(const PosteriorParams& post, double kappa0, double beta,
                              const BesselEval& at_kappa0, LambertMode mode) {
  const double slope = beta - post.beta0;
  const double excess = slope - at_kappa0.ratio;
  if (!(excess > 0.0) || !(kappa0 > 0.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "envelope requires beta > beta0 + r(kappa0) and kappa0 > 0 (eta=" << post.eta
       << ", beta0=" << post.beta0 << ", kappa0=" << kappa0 << ", beta=" << beta << ")";
    throw NumericError(os.str());
  }
  Envelope env;
  env.kappa0 = kappa0;
  env.beta = beta;
  env.log_i0_kappa0 = at_kappa0.log_i0;
  env.r_kappa0 = at_kappa0.ratio;

  const double c3 = (at_kappa0.log_i0 / kappa0 - slope) / excess;
  const double t = c3 * std::exp(c3);
  const double c4 = mode == LambertMode::exact ? lambert_w0(t) : lambert_w0_winitzki(t);
  // For c3 below about -745 the product underflows and epsilon is 0.
  env.epsilon = c4 * kappa0 / (c3 - c4);
  if (!(env.epsilon >= 0.0)) env.epsilon = 0.0;
  env.alpha = excess * (kappa0 + env.epsilon);

  env.g_at_kappa0 = detail::g_terms(slope, env.alpha, env.epsilon, kappa0, at_kappa0.log_i0);
  env.g_at_zero = env.epsilon > 0.0 || env.alpha == 0.0
                      ? detail::g_terms(slope, env.alpha, env.epsilon, 0.0, 0.0)
                      : env.g_at_kappa0;  // epsilon underflowed; g(0) = g(kappa0) analytically
  return env;
}

/// Closed-form near-optimal envelope: interpolated kappa0 between the Amos
/// bound roots, a switching approximation for beta, then epsilon and alpha.
inline Envelope approx_tune(const PosteriorParams& post, LambertMode mode = LambertMode::winitzki) {
  const auto bracket = kappa_bracket(post);
  const double eta = post.eta;
  const double b0 = post.beta0;
  const double kappa0 = bracket.interpolated;
  const auto at = bessel_eval(kappa0);
  const double r = at.ratio;
  const double c2 = 1.0 / (4.0 * eta) - 2.0 / (3.0 * std::sqrt(eta));
  double beta;
  if (b0 <= c2) {
    beta = b0 + 1.0;
  } else {
    const double d = b0 - c2;
    beta = b0 + r + (1.0 - r) / (1.0 + 40.0 * eta * d * d);
  }
  return envelope_from(post, kappa0, beta, at, mode);
}

/// Log of the per-parameter part of the acceptance probability; maximizing it
/// over (kappa0, alpha, beta, epsilon) maximizes the expected acceptance.
inline double h_value(const PosteriorParams& post, double kappa0, double alpha, double beta,
                      double epsilon) {
  const double eta = post.eta;
  const double g0 = detail::g_terms(beta - post.beta0, alpha, epsilon, kappa0, log_bessel_i0(kappa0));
  return (alpha + 1.0 / eta) * std::log(eta * beta) - log_gamma_fn(eta * alpha + 1.0) / eta -
         beta * epsilon - g0;
}

inline double h_value(const PosteriorParams& post, const Envelope& env) {
  return h_value(post, env.kappa0, env.alpha, env.beta, env.epsilon);
}

namespace detail {

// x / (log1p(x) - x), continuous at both ends: -2/x as x -> 0, -1 as x -> inf.
inline double log1p_excess_ratio(double x) {
  if (std::isinf(x)) return -1.0;
  if (x < 1e-4) return 1.0 / (x * (-0.5 + x * (1.0 / 3.0 - 0.25 * x)));
  return x / (std::log1p(x) - x);
}

// Partial derivative of the Lagrangian in beta, with alpha, epsilon and both
// multipliers eliminated through their stationarity conditions. Rewritten so
// that epsilon -> 0 stays finite.
inline double lagrangian_beta_slope(const PosteriorParams& post, const Envelope& env) {
  const double eta = post.eta;
  const double a = env.alpha;
  const double eps = env.epsilon;
  const double beta = env.beta;
  const double k0 = env.kappa0;
  const double span = k0 + eps;
  const double numer =
      digamma(eta * a + 1.0) - std::log(eta * beta * span) - 1.0 + beta * span / a;
  const double q = eps > 0.0 ? log1p_excess_ratio(k0 / eps) : -1.0;
  const double lambda2_k0 = numer * eps * q;
  const double lambda1 = span / a * (beta * span - a) + span * numer * q;
  return (a + 1.0 / eta) / beta - span + lambda1 - lambda2_k0;
}

struct OracleCandidate {
  Envelope env;
  double h = -std::numeric_limits<double>::infinity();
};

inline std::string oracle_context(const PosteriorParams& post, double kappa0) {
  std::ostringstream os;
  os.precision(17);
  os << "(eta=" << post.eta << ", beta0=" << post.beta0 << ", kappa0=" << kappa0 << ")";
  return os.str();
}

inline OracleCandidate oracle_at(const PosteriorParams& post, double kappa0) {
  const auto at = bessel_eval(kappa0);
  const double lo0 = std::max(0.0, post.beta0 + at.ratio) + 1e-9;
  const double hi0 = post.beta0 + 1.0;
  if (!(lo0 < hi0)) {
    throw NumericError("oracle_tune: empty beta interval " + oracle_context(post, kappa0));
  }
  const auto slope_at = [&](double beta) {
    return lagrangian_beta_slope(post, envelope_from(post, kappa0, beta, at, LambertMode::exact));
  };
  // The slope decreases from +inf; non-finite values only occur at the left
  // end (epsilon underflow) and count as positive.
  const auto positive = [](double s) { return !(s <= 0.0); };

  double beta;
  if (positive(slope_at(hi0))) {
    beta = hi0;
  } else {
    if (!positive(slope_at(lo0))) {
      throw NumericError("oracle_tune: bisection bracket does not change sign " +
                         oracle_context(post, kappa0));
    }
    double lo = lo0;
    double hi = hi0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (positive(slope_at(mid)) ? lo : hi) = mid;
    }
    beta = 0.5 * (lo + hi);
  }
  OracleCandidate c;
  c.env = envelope_from(post, kappa0, beta, at, LambertMode::exact);
  c.h = h_value(post, c.env);
  if (!std::isfinite(c.h)) c.h = -std::numeric_limits<double>::infinity();
  return c;
}

}  // namespace detail

/// Numerically optimal envelope. For each candidate kappa0 the optimal beta
/// is the root of dL/dbeta on (max(0, beta0 + r), beta0 + 1], or the right
/// end when the slope is still positive there; golden-section search then
/// maximizes h over kappa0 in [kappa_L / 4, 4 kappa_U]. Ties go left.
///
/// Slow (thousands of Bessel/Lambert evaluations); meant for validation.
inline Envelope oracle_tune(const PosteriorParams& post) {
  const auto bracket = kappa_bracket(post);
  constexpr double inv_phi = 0.6180339887498949;
  double a = bracket.lower / 4.0;
  double b = bracket.upper * 4.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  auto fc = detail::oracle_at(post, c);
  auto fd = detail::oracle_at(post, d);
  while (b - a > 1e-8 * 0.5 * (a + b)) {
    if (fc.h >= fd.h) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = detail::oracle_at(post, c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = detail::oracle_at(post, d);
    }
  }
  return fc.h >= fd.h ? fc.env : fd.env;
}

/// Shape of the target density used to lay out quadrature panels.
struct DensitySupport {
  double mode = 0.0;
  double scale = 1.0;
  double upper = 1.0;
};

/// log of the unnormalized target, -eta beta0 kappa - eta log I0(kappa).
inline double log_unnormalized_density(const PosteriorParams& post, double kappa) {
  return -post.eta * (post.beta0 * kappa + log_bessel_i0(kappa));
}

/// Mode, curvature scale and truncation point of the target. The cutoff
/// starts from kappa_max = mode + (eta/2 log kappa_max + 40) / (eta (1 + beta0))
/// (two fixed-point passes) and is then extended until the log density sits
/// at least 40 below its peak.
inline DensitySupport density_support(const PosteriorParams& post) {
  validate(post);
  const double eta = post.eta;
  const double b0 = post.beta0;
  DensitySupport s;
  if (b0 < 0.0) {
    // r(kappa) = -beta0 on an increasing r.
    double lo = 0.0;
    double hi = 1.0;
    while (bessel_ratio(hi) < -b0) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-15 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (bessel_ratio(mid) < -b0 ? lo : hi) = mid;
    }
    s.mode = 0.5 * (lo + hi);
  }
  double curvature = 0.5;  // r'(0)
  if (s.mode > 0.0) {
    const double r = bessel_ratio(s.mode);
    curvature = std::max(1.0 - r / s.mode - r * r, 1e-300);
  }
  const double decay = eta * (1.0 + b0);
  s.scale = std::min(1.0 / std::sqrt(eta * curvature), b0 > 0.0 ? 1.0 / (eta * b0) : 1e300);

  double upper = s.mode + 40.0 / decay;
  for (int pass = 0; pass < 2; ++pass) {
    // The log term can drive the numerator negative for large eta and a mode
    // at 0; the curvature bound below takes over there.
    upper = s.mode + std::max(0.5 * eta * std::log(upper) + 40.0, 1.0) / decay;
  }
  upper = std::max(upper, s.mode + 10.0 * s.scale);
  const double peak = log_unnormalized_density(post, s.mode);
  for (int it = 0; it < 200 && log_unnormalized_density(post, upper) - peak > -40.0; ++it) {
    upper = s.mode + 2.0 * (upper - s.mode);
  }
  s.upper = upper;
  return s;
}

/// Panel breakpoints clustered around the mode.
inline std::vector<double> density_breakpoints(const DensitySupport& s) {
  std::vector<double> pts{0.0, s.upper};
  if (s.mode > 0.0 && s.mode < s.upper) pts.push_back(s.mode);
  for (double m : {1.0, 3.0, 8.0, 20.0}) {
    for (double sign : {-1.0, 1.0}) {
      const double x = s.mode + sign * m * s.scale;
      if (x > 0.0 && x < s.upper) pts.push_back(x);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// log of integral over [0, upper] of exp(log_f), computed relative to `shift`.
template <typename LogF>
double log_integral(LogF&& log_f, double shift, const std::vector<double>& breakpoints,
                    const quadrature::Options& opt) {
  const auto res = quadrature::integrate([&](double x) { return std::exp(log_f(x) - shift); },
                                         std::span<const double>(breakpoints), opt);
  if (!(res.value > 0.0)) throw NumericError("log_integral: non-positive integral");
  return shift + std::log(res.value);
}

/// log of the normalizing integral of I0(kappa)^(-eta) exp(-eta beta0 kappa)
/// over kappa >= 0, via adaptive Gauss-Kronrod on the scaled integrand.
///
/// Throws DomainError for beta0 <= -1.
inline double log_normalizer(const PosteriorParams& post, const quadrature::Options& opt = {}) {
  const auto support = density_support(post);
  const double shift = log_unnormalized_density(post, support.mode);
  // log I0(kappa) is good to a few ulps of kappa, so the integrand carries
  // relative noise of order eta * kappa * eps near the mode; asking for less
  // only exhausts the interval budget.
  quadrature::Options o = opt;
  const double noise = 16.0 * std::numeric_limits<double>::epsilon() * post.eta * (support.mode + support.scale);
  o.rel_tol = std::max(o.rel_tol, noise);
  return log_integral([&](double k) { return log_unnormalized_density(post, k); }, shift,
                      density_breakpoints(support), o);
}

/// Expected acceptance probability of the rejection loop for this envelope,
/// with truncation discards counted as rejections. `log_norm` must be
/// log_normalizer(post).
inline double expected_acceptance(const PosteriorParams& post, const Envelope& env, double log_norm) {
  const double eta = post.eta;
  const double shape = eta * env.alpha + 1.0;
  const double rate = eta * env.beta;
  const double log_acc = shape * std::log(rate) - log_gamma_fn(shape) - rate * env.epsilon -
                         eta * env.threshold() + log_norm;
  return std::exp(log_acc);
}

inline double expected_acceptance(const PosteriorParams& post, const Envelope& env) {
  return expected_acceptance(post, env, log_normalizer(post));
}

}  // namespace besselexp

#endif  // BESSELEXP_TUNING_HPP
