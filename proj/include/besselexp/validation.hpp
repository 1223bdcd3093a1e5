#ifndef BESSELEXP_VALIDATION_HPP
#define BESSELEXP_VALIDATION_HPP

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <exception>
#include <vector>

#include "besselexp/errors.hpp"
#include "besselexp/quadrature.hpp"
#include "besselexp/rng.hpp"
#include "besselexp/sampler.hpp"
#include "besselexp/special_functions.hpp"
#include "besselexp/tuning.hpp"

namespace besselexp {

// ---------------------------------------------------------------------------
// Tabulated CDF
// ---------------------------------------------------------------------------

struct CdfNode {
  double kappa;
  double cdf;
  double density;  // normalized
};

/// Piecewise cubic Hermite CDF of the target built from Gauss-Legendre panel
/// integrals. Panels are bisected until both the panel integral and the
/// Hermite interpolant at the panel midpoint agree to within the tolerance,
/// so nodes crowd where the density bends. Kept independent of the
/// Gauss-Kronrod path used by log_normalizer.
class CdfTable {
 public:
  CdfTable() = default;

  [[nodiscard]] const std::vector<CdfNode>& nodes() const { return nodes_; }
  [[nodiscard]] double cutoff() const { return nodes_.back().kappa; }
  /// log of the unnormalized mass the table integrated.
  [[nodiscard]] double log_mass() const { return log_mass_; }

  [[nodiscard]] double cdf(double kappa) const {
    if (!(kappa > 0.0)) return 0.0;
    if (kappa >= cutoff()) return 1.0;
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), kappa,
                                     [](double k, const CdfNode& n) { return k < n.kappa; });
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    return std::clamp(hermite(lo, hi, kappa), 0.0, 1.0);
  }

  /// Inverse CDF by bisection on the panel's cubic.
  [[nodiscard]] double quantile(double p) const {
    if (!(p > 0.0)) return 0.0;
    if (p >= 1.0) return cutoff();
    const auto it = std::upper_bound(nodes_.begin(), nodes_.end(), p,
                                     [](double q, const CdfNode& n) { return q < n.cdf; });
    if (it == nodes_.end()) return cutoff();
    const auto& hi = *it;
    const auto& lo = *(it - 1);
    double a = lo.kappa;
    double b = hi.kappa;
    for (int i = 0; i < 80 && b - a > 1e-15 * b; ++i) {
      const double m = 0.5 * (a + b);
      (hermite(lo, hi, m) < p ? a : b) = m;
    }
    return 0.5 * (a + b);
  }

 private:
  friend CdfTable quadrature_cdf(const PosteriorParams& post, double tol);

  static double hermite(const CdfNode& lo, const CdfNode& hi, double x) {
    const double h = hi.kappa - lo.kappa;
    const double t = (x - lo.kappa) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * lo.cdf + (t3 - 2 * t2 + t) * h * lo.density +
           (-2 * t3 + 3 * t2) * hi.cdf + (t3 - t2) * h * hi.density;
  }

  std::vector<CdfNode> nodes_;
  double log_mass_ = 0.0;
};

namespace detail {

inline constexpr std::array<double, 5> kGlNodes = {0.1488743389816312108848260, 0.4333953941292471907992659,
                                                   0.6794095682990244062343274, 0.8650633666889845107320967,
                                                   0.9739065285171717200779640};
inline constexpr std::array<double, 5> kGlWeights = {0.2955242247147528701738930, 0.2692667193099963550912269,
                                                     0.2190863625159820439955349, 0.1494513491505805931457763,
                                                     0.0666713443086881375935688};

template <typename F>
double gauss_legendre10(const F& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    s += kGlWeights[i] * (f(c - h * kGlNodes[i]) + f(c + h * kGlNodes[i]));
  }
  return s * h;
}

}  // namespace detail

/// Tabulates the normalized CDF of the target with pointwise error about
/// `tol` (in (1e-12, 1e-3)).
inline CdfTable quadrature_cdf(const PosteriorParams& post, double tol = 1e-10) {
  if (!(tol > 1e-12 && tol < 1e-3)) throw DomainError(detail::describe("quadrature_cdf tol", tol));
  const auto support = density_support(post);
  const double shift = log_unnormalized_density(post, support.mode);
  const auto density = [&](double k) { return std::exp(log_unnormalized_density(post, k) - shift); };

  std::vector<double> starts;
  const auto breaks = density_breakpoints(support);
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    for (int j = 0; j < 8; ++j) starts.push_back(breaks[i] + (breaks[i + 1] - breaks[i]) * j / 8.0);
  }
  starts.push_back(breaks.back());

  double coarse = 0.0;
  for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
    coarse += detail::gauss_legendre10(density, starts[i], starts[i + 1]);
  }
  const double hermite_tol = 0.25 * tol * coarse;
  const double panel_tol = 1e-3 * tol * coarse;

  struct Pending {
    double a, b, fa, fb, integral;
    int depth;
  };
  std::vector<CdfNode> nodes{{0.0, 0.0, density(0.0)}};
  double running = 0.0;
  for (std::size_t i = 0; i + 1 < starts.size(); ++i) {
    // Depth-first, left to right, so accepted panels arrive in order.
    std::vector<Pending> stack;
    const double a0 = starts[i];
    const double b0 = starts[i + 1];
    stack.push_back({a0, b0, density(a0), density(b0), detail::gauss_legendre10(density, a0, b0), 0});
    while (!stack.empty()) {
      const Pending p = stack.back();
      stack.pop_back();
      const double m = 0.5 * (p.a + p.b);
      const double fm = density(m);
      const double left = detail::gauss_legendre10(density, p.a, m);
      const double right = detail::gauss_legendre10(density, m, p.b);
      const double interp_left = 0.5 * p.integral + (p.b - p.a) * (p.fa - p.fb) / 8.0;
      const bool ok = std::abs(left + right - p.integral) <= panel_tol &&
                      std::abs(interp_left - left) <= hermite_tol;
      if (ok || p.depth >= 48) {
        running += left + right;
        nodes.push_back({p.b, running, p.fb});
      } else {
        stack.push_back({m, p.b, fm, p.fb, right, p.depth + 1});
        stack.push_back({p.a, m, p.fa, fm, left, p.depth + 1});
      }
    }
  }
  if (!(running > 0.0)) throw NumericError("quadrature_cdf: zero mass");
  for (auto& n : nodes) {
    n.cdf /= running;
    n.density /= running;
  }
  nodes.back().cdf = 1.0;
  CdfTable table;
  table.nodes_ = std::move(nodes);
  table.log_mass_ = shift + std::log(running);
  return table;
}

// ---------------------------------------------------------------------------
// Kolmogorov-Smirnov
// ---------------------------------------------------------------------------

struct KsResult {
  double statistic = 0.0;
  double p_value = 1.0;
};

/// Survival function of the Kolmogorov distribution, P(K > lambda).
inline double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    // Jacobi-theta form converges fast for small lambda.
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double s = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      s += std::exp(-m * m * c);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * s, 0.0, 1.0);
  }
  double s = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    s += (k % 2 == 1 ? term : -term);
    if (term < 1e-18) break;
  }
  return std::clamp(2.0 * s, 0.0, 1.0);
}

/// One-sample KS test against a continuous CDF. Asymptotic p-value with
/// Stephens' small-sample correction of the scaling.
template <typename Cdf>
KsResult ks_test(std::vector<double> samples, const Cdf& cdf) {
  if (samples.empty()) throw DomainError("ks_test: no samples");
  std::sort(samples.begin(), samples.end());
  const double n = static_cast<double>(samples.size());
  double d = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double f = cdf(samples[i]);
    const double di = static_cast<double>(i);
    d = std::max({d, (di + 1.0) / n - f, f - di / n});
  }
  const double sn = std::sqrt(n);
  return {d, kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)};
}

inline KsResult ks_test(std::vector<double> samples, const CdfTable& table) {
  return ks_test(std::move(samples), [&](double k) { return table.cdf(k); });
}

// ---------------------------------------------------------------------------
// Efficiency sweep
// ---------------------------------------------------------------------------

struct EfficiencyPoint {
  double beta0 = 0.0;
  double eff_approx = 0.0;
  double eff_oracle = 0.0;
  double eff_empirical = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
};

struct EfficiencyCurve {
  double eta = 1.0;
  std::vector<EfficiencyPoint> points;
  bool has_empirical = false;
};

struct SweepOptions {
  bool empirical = false;
  std::size_t proposals = 10'000;
  LambertMode lambert = LambertMode::winitzki;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
};

/// Interior grid of (-1, 1): beta0_i = -1 + 2 i / (n + 1), i = 1..n.
inline std::vector<double> beta0_grid(std::size_t n) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) g[i] = -1.0 + 2.0 * static_cast<double>(i + 1) / static_cast<double>(n + 1);
  return g;
}

/// Fraction of proposals accepted over a fixed number of proposals.
template <VariateSource Rng>
std::pair<double, double> empirical_acceptance(const PosteriorParams& post, const Envelope& env,
                                               std::size_t proposals, Rng& rng) {
  SampleStats stats;
  while (stats.proposals < proposals) {
    sample_kappa_squeezed(post, env, rng, stats);
  }
  const double p = stats.acceptance_rate();
  return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(stats.proposals))};
}

inline EfficiencyPoint efficiency_point(const PosteriorParams& post, const SweepOptions& opt, RngStream rng) {
  EfficiencyPoint pt;
  pt.beta0 = post.beta0;
  const double log_norm = log_normalizer(post);
  const auto approx = approx_tune(post, opt.lambert);
  pt.eff_approx = expected_acceptance(post, approx, log_norm);
  pt.eff_oracle = expected_acceptance(post, oracle_tune(post), log_norm);
  if (opt.empirical) {
    std::tie(pt.eff_empirical, pt.se) = empirical_acceptance(post, approx, opt.proposals, rng);
  }
  return pt;
}

/// Expected acceptance of the fast and the optimal envelope on the interior
/// beta0 grid, for every eta. Point i of curve j draws from substream
/// j * grid_size + i, so results do not depend on `jobs`.
inline std::vector<EfficiencyCurve> efficiency_sweep(const std::vector<double>& etas, std::size_t grid_size,
                                                     const SweepOptions& opt = {}) {
  if (grid_size < 10) throw DomainError("efficiency_sweep: grid_size must be at least 10");
  const auto grid = beta0_grid(grid_size);
  const RngStream root(opt.seed);
  std::vector<EfficiencyCurve> curves;
  for (std::size_t j = 0; j < etas.size(); ++j) {
    EfficiencyCurve curve;
    curve.eta = etas[j];
    curve.has_empirical = opt.empirical;
    curve.points.resize(grid.size());
    const auto work = [&](std::size_t i) {
      curve.points[i] =
          efficiency_point({etas[j], grid[i]}, opt, root.split(j * grid_size + i));
    };
    const unsigned jobs = std::max(1u, opt.jobs);
    if (jobs == 1) {
      for (std::size_t i = 0; i < grid.size(); ++i) work(i);
    } else {
      std::vector<std::thread> pool;
      std::vector<std::exception_ptr> errors(jobs);
      for (unsigned w = 0; w < jobs; ++w) {
        pool.emplace_back([&, w] {
          try {
            for (std::size_t i = w; i < grid.size(); i += jobs) work(i);
          } catch (...) {
            errors[w] = std::current_exception();
          }
        });
      }
      for (auto& t : pool) t.join();
      for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
      }
    }
    curves.push_back(std::move(curve));
  }
  return curves;
}

inline std::string format_g9(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

/// `beta0,eff_approx,eff_oracle[,eff_empirical,se]`, 9 significant digits, LF.
inline void write_efficiency_csv(std::ostream& os, const EfficiencyCurve& curve) {
  os << "beta0,eff_approx,eff_oracle";
  if (curve.has_empirical) os << ",eff_empirical,se";
  os << '\n';
  for (const auto& p : curve.points) {
    os << format_g9(p.beta0) << ',' << format_g9(p.eff_approx) << ',' << format_g9(p.eff_oracle);
    if (curve.has_empirical) os << ',' << format_g9(p.eff_empirical) << ',' << format_g9(p.se);
    os << '\n';
  }
}

// ---------------------------------------------------------------------------
// Closed-form claims about the target
// ---------------------------------------------------------------------------

struct NormalizationCheck {
  double beta0 = 0.0;
  double integral_reciprocal_i0 = 0.0;  // ∫ exp(-beta0 k) / I0(k) dk
  double integral_i0 = 0.0;             // ∫ exp(-beta0 k) I0(k) dk
  double residual_sqrt_reciprocal = 0.0;     // |sqrt(b^2-1) * ∫ e^{-bk}/I0 - 1|
  double residual_invsqrt_reciprocal = 0.0;  // |∫ e^{-bk}/I0 / sqrt(b^2-1) - 1|
  double residual_sqrt_i0 = 0.0;             // |sqrt(b^2-1) * ∫ e^{-bk} I0 - 1|
};

struct GammaLimitCheck {
  double eta = 0.0;
  double beta0 = 0.0;
  double mean_substituted = 0.0;  // mean of the density with I0 replaced by e^k / sqrt(2 pi k)
  double mean_exact = 0.0;        // mean of the actual target
  double predicted_plus = 0.0;    // (eta/2 + 1) / (eta (beta0 + 1))
  double predicted_minus = 0.0;   // (eta/2 + 1) / (eta (beta0 - 1))
  double residual_plus = 0.0;
  double residual_minus = 0.0;
};

struct ErrataReport {
  std::vector<NormalizationCheck> normalization;
  std::vector<GammaLimitCheck> gamma_limit;
  std::string normalization_winner;
  double normalization_winner_residual = 0.0;
  std::string gamma_winner;
  double gamma_winner_residual = 0.0;
  std::string text;
};

namespace detail {

// Integral of exp(log_f) over [0, inf) for a log-concave-ish integrand peaked
// at `peak`; the upper limit doubles until log_f is 45 below its peak value.
template <typename LogF>
double log_integral_half_line(LogF&& log_f, double peak, double scale) {
  const double top = log_f(peak);
  double upper = peak + 10.0 * scale;
  while (log_f(upper) - top > -45.0) upper = peak + 2.0 * (upper - peak);
  std::vector<double> pts{0.0, upper};
  for (double m : {0.25, 1.0, 4.0, 16.0, 64.0}) {
    for (double sg : {-1.0, 1.0}) {
      const double x = peak + sg * m * scale;
      if (x > 0.0 && x < upper) pts.push_back(x);
    }
  }
  if (peak > 0.0 && peak < upper) pts.push_back(peak);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quadrature::Options opt;
  opt.rel_tol = 1e-14;
  opt.max_intervals = 20000;
  return log_integral(std::forward<LogF>(log_f), top, pts, opt);
}

}  // namespace detail

/// Checks two closed-form statements about the target against quadrature:
/// the eta = 1 normalizing constant sqrt(beta0^2 - 1), and the rate of the
/// gamma density obtained by substituting the large-kappa form of I0.
/// Deterministic.
inline ErrataReport adjudicate_errata() {
  ErrataReport rep;
  std::ostringstream os;
  os.precision(10);

  double worst[3] = {0.0, 0.0, 0.0};
  for (double b0 : {1.5, 2.0, 5.0}) {
    NormalizationCheck c;
    c.beta0 = b0;
    const double root = std::sqrt(b0 * b0 - 1.0);
    c.integral_reciprocal_i0 = std::exp(log_normalizer({1.0, b0}));
    c.integral_i0 = std::exp(detail::log_integral_half_line(
        [&](double k) { return log_bessel_i0(k) - b0 * k; }, 0.0, 1.0 / (b0 - 1.0)));
    c.residual_sqrt_reciprocal = std::abs(root * c.integral_reciprocal_i0 - 1.0);
    c.residual_invsqrt_reciprocal = std::abs(c.integral_reciprocal_i0 / root - 1.0);
    c.residual_sqrt_i0 = std::abs(root * c.integral_i0 - 1.0);
    worst[0] = std::max(worst[0], c.residual_sqrt_reciprocal);
    worst[1] = std::max(worst[1], c.residual_invsqrt_reciprocal);
    worst[2] = std::max(worst[2], c.residual_sqrt_i0);
    rep.normalization.push_back(c);
  }
  const char* names[3] = {"A = sqrt(beta0^2 - 1) normalizes exp(-beta0 k) / I0(k)",
                          "A = 1 / sqrt(beta0^2 - 1) normalizes exp(-beta0 k) / I0(k)",
                          "A = sqrt(beta0^2 - 1) normalizes exp(-beta0 k) * I0(k)"};
  const auto best = static_cast<std::size_t>(std::min_element(worst, worst + 3) - worst);
  rep.normalization_winner = names[best];
  rep.normalization_winner_residual = worst[best];

  const double eta = 200.0;
  double worst_plus = 0.0;
  double worst_minus = 0.0;
  for (double b0 : {2.0, -0.5}) {
    GammaLimitCheck c;
    c.eta = eta;
    c.beta0 = b0;
    const auto log_sub = [&](double k) {
      return 0.5 * eta * std::log(2.0 * std::numbers::pi * k) - eta * (b0 + 1.0) * k;
    };
    const double sub_peak = 0.5 / (b0 + 1.0);
    const double sub_scale = std::sqrt(0.5 * eta) / (eta * (b0 + 1.0));
    const double z0 = detail::log_integral_half_line(log_sub, sub_peak, sub_scale);
    const double z1 = detail::log_integral_half_line(
        [&](double k) { return std::log(k) + log_sub(k); }, sub_peak, sub_scale);
    c.mean_substituted = std::exp(z1 - z0);

    const PosteriorParams post{eta, b0};
    const auto support = density_support(post);
    const auto log_p = [&](double k) { return log_unnormalized_density(post, k); };
    const double e0 = detail::log_integral_half_line(log_p, support.mode, support.scale);
    const double e1 = detail::log_integral_half_line(
        [&](double k) { return std::log(k) + log_p(k); }, std::max(support.mode, support.scale),
        support.scale);
    c.mean_exact = std::exp(e1 - e0);

    c.predicted_plus = (eta / 2.0 + 1.0) / (eta * (b0 + 1.0));
    c.predicted_minus = (eta / 2.0 + 1.0) / (eta * (b0 - 1.0));
    c.residual_plus = std::abs(c.predicted_plus / c.mean_substituted - 1.0);
    c.residual_minus = std::abs(c.predicted_minus / c.mean_substituted - 1.0);
    worst_plus = std::max(worst_plus, c.residual_plus);
    worst_minus = std::max(worst_minus, c.residual_minus);
    rep.gamma_limit.push_back(c);
  }
  if (worst_plus <= worst_minus) {
    rep.gamma_winner = "rate eta * (beta0 + 1)";
    rep.gamma_winner_residual = worst_plus;
  } else {
    rep.gamma_winner = "rate eta * (beta0 - 1)";
    rep.gamma_winner_residual = worst_minus;
  }

  os << "normalizing constant at eta = 1\n";
  for (const auto& c : rep.normalization) {
    os << "  beta0 = " << c.beta0 << ": int e^{-b k}/I0 = " << c.integral_reciprocal_i0
       << ", int e^{-b k} I0 = " << c.integral_i0 << "\n"
       << "    residual sqrt*int(1/I0) = " << format_g9(c.residual_sqrt_reciprocal)
       << ", int(1/I0)/sqrt = " << format_g9(c.residual_invsqrt_reciprocal)
       << ", sqrt*int(I0) = " << format_g9(c.residual_sqrt_i0) << "\n";
  }
  os << "  verdict: " << rep.normalization_winner << " (max residual "
     << format_g9(rep.normalization_winner_residual) << ")\n";
  os << "gamma limit of the target with I0(k) ~ e^k / sqrt(2 pi k), shape eta/2 + 1\n";
  for (const auto& c : rep.gamma_limit) {
    os << "  eta = " << c.eta << ", beta0 = " << c.beta0 << ": substituted mean = "
       << format_g9(c.mean_substituted) << " (target mean " << format_g9(c.mean_exact) << ")\n"
       << "    rate eta(beta0+1): mean " << format_g9(c.predicted_plus) << ", rel. residual "
       << format_g9(c.residual_plus) << "\n"
       << "    rate eta(beta0-1): mean " << format_g9(c.predicted_minus) << ", rel. residual "
       << format_g9(c.residual_minus) << "\n";
  }
  os << "  verdict: " << rep.gamma_winner << " (max residual " << format_g9(rep.gamma_winner_residual)
     << ")\n";
  rep.text = os.str();
  return rep;
}

// ---------------------------------------------------------------------------
// Throughput
// ---------------------------------------------------------------------------

struct BenchOptions {
  /// Draw beta0 ~ Uniform(-1, 1) and re-tune every `retune_every` samples;
  /// otherwise sample the fixed posterior with a single tuning.
  bool random_beta0 = false;
  std::size_t retune_every = 100;
  LambertMode lambert = LambertMode::winitzki;
};

struct BenchResult {
  double samples_per_second = 0.0;
  std::uint64_t samples = 0;
  double elapsed_seconds = 0.0;
  SampleStats stats;

  [[nodiscard]] double bessel_fraction() const {
    const auto loops = stats.proposals - stats.truncation_rejects;
    return loops == 0 ? 0.0 : static_cast<double>(stats.bessel_evals) / static_cast<double>(loops);
  }
  [[nodiscard]] double squeeze_fraction() const {
    const auto loops = stats.proposals - stats.truncation_rejects;
    return loops == 0 ? 0.0
                      : static_cast<double>(stats.squeeze_accepts + stats.squeeze_rejects) /
                            static_cast<double>(loops);
  }
};

/// Wall-clock sampling rate, single-threaded. Tuning cost is included when
/// re-tuning with random beta0.
inline BenchResult throughput_bench(const PosteriorParams& post, LoopKind loop, double seconds, RngStream& rng,
                                    const BenchOptions& opt = {}) {
  if (!(seconds >= 0.1 && seconds <= 600.0)) throw DomainError(detail::describe("throughput_bench seconds", seconds));
  using clock = std::chrono::steady_clock;
  const auto start = clock::now();
  const auto budget = std::chrono::duration<double>(seconds);
  BenchResult res;
  PosteriorParams current = post;
  Envelope env = approx_tune(current, opt.lambert);
  const std::size_t block = std::max<std::size_t>(1, opt.retune_every);
  double sink = 0.0;
  while (clock::now() - start < budget) {
    if (opt.random_beta0) {
      current.beta0 = 2.0 * rng.uniform() - 1.0;
      env = approx_tune(current, opt.lambert);
    }
    for (std::size_t i = 0; i < block; ++i) sink += sample_kappa(current, env, loop, rng, res.stats);
    res.samples += block;
  }
  res.elapsed_seconds = std::chrono::duration<double>(clock::now() - start).count();
  res.samples_per_second = static_cast<double>(res.samples) / res.elapsed_seconds;
  if (sink < 0.0) res.samples_per_second = 0.0;  // keeps the draws observable
  return res;
}

}  // namespace besselexp

#endif  // BESSELEXP_VALIDATION_HPP
