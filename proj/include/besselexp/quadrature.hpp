#ifndef BESSELEXP_QUADRATURE_HPP
#define BESSELEXP_QUADRATURE_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <queue>
#include <span>
#include <vector>

#include "besselexp/errors.hpp"

namespace besselexp::quadrature {

struct Options {
  double rel_tol = 1e-13;
  double abs_tol = 0.0;
  std::size_t max_intervals = 4000;
  /// Each initial segment between breakpoints is split into this many panels.
  std::size_t initial_panels = 1;
};

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t evaluations = 0;
  std::size_t intervals = 0;
};

namespace detail {

// 7-point Gauss / 15-point Kronrod abscissae and weights (QUADPACK qk15).
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a;
  double b;
  double value;
  double error;
  bool operator<(const Panel& other) const { return error < other.error; }
};

template <typename F>
Panel kronrod15(F& f, double a, double b) {
  const double centre = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(centre);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(centre - dx) + f(centre + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  return {a, b, kronrod * half, std::abs((kronrod - gauss) * half)};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over the segments
/// delimited by `breakpoints` (sorted, at least two entries). The panel with
/// the largest error estimate is bisected until the summed estimate falls
/// below max(abs_tol, rel_tol * |value|).
///
/// Throws NumericError when the interval budget is exhausted.
template <typename F>
Result integrate(F&& f, std::span<const double> breakpoints, const Options& opt = {}) {
  if (breakpoints.size() < 2) throw NumericError("integrate: need at least two breakpoints");
  std::priority_queue<detail::Panel> heap;
  Result res;
  double total = 0.0;
  double error = 0.0;
  const std::size_t panels = std::max<std::size_t>(1, opt.initial_panels);
  for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
    const double a = breakpoints[i];
    const double b = breakpoints[i + 1];
    if (!(b > a)) continue;
    for (std::size_t p = 0; p < panels; ++p) {
      const double lo = a + (b - a) * static_cast<double>(p) / static_cast<double>(panels);
      const double hi = p + 1 == panels
                            ? b
                            : a + (b - a) * static_cast<double>(p + 1) / static_cast<double>(panels);
      auto panel = detail::kronrod15(f, lo, hi);
      res.evaluations += 15;
      total += panel.value;
      error += panel.error;
      heap.push(panel);
    }
  }
  while (!heap.empty() && error > std::max(opt.abs_tol, opt.rel_tol * std::abs(total))) {
    if (heap.size() >= opt.max_intervals) {
      throw NumericError("integrate: interval budget exhausted before reaching tolerance");
    }
    const auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw NumericError("integrate: panel collapsed to machine resolution");
    }
    const auto left = detail::kronrod15(f, worst.a, mid);
    const auto right = detail::kronrod15(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  // Re-sum to shed the drift accumulated by incremental updates.
  total = 0.0;
  error = 0.0;
  res.intervals = heap.size();
  while (!heap.empty()) {
    total += heap.top().value;
    error += heap.top().error;
    heap.pop();
  }
  res.value = total;
  res.abs_error = error;
  return res;
}

template <typename F>
Result integrate(F&& f, std::initializer_list<double> breakpoints, const Options& opt = {}) {
  return integrate(std::forward<F>(f), std::span<const double>(breakpoints.begin(), breakpoints.size()),
                   opt);
}

}  // namespace besselexp::quadrature

#endif  // BESSELEXP_QUADRATURE_HPP
