#ifndef BESSELEXP_SAMPLER_HPP
#define BESSELEXP_SAMPLER_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "besselexp/errors.hpp"
#include "besselexp/rng.hpp"
#include "besselexp/special_functions.hpp"
#include "besselexp/tuning.hpp"

namespace besselexp {

/// Loop instrumentation. Every proposal ends in exactly one of
/// truncation_rejects, accepted or loop_rejects.
struct SampleStats {
  std::uint64_t proposals = 0;
  std::uint64_t truncation_rejects = 0;
  std::uint64_t accepted = 0;
  std::uint64_t loop_rejects = 0;
  std::uint64_t squeeze_accepts = 0;
  std::uint64_t squeeze_rejects = 0;
  std::uint64_t bessel_evals = 0;

  SampleStats& operator+=(const SampleStats& o) {
    proposals += o.proposals;
    truncation_rejects += o.truncation_rejects;
    accepted += o.accepted;
    loop_rejects += o.loop_rejects;
    squeeze_accepts += o.squeeze_accepts;
    squeeze_rejects += o.squeeze_rejects;
    bessel_evals += o.bessel_evals;
    return *this;
  }

  [[nodiscard]] bool conserved() const {
    return proposals == truncation_rejects + accepted + loop_rejects &&
           bessel_evals <= proposals - squeeze_accepts - squeeze_rejects;
  }

  /// accepted / proposals, with truncation discards counted as rejections.
  [[nodiscard]] double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(accepted) / static_cast<double>(proposals);
  }
};

/// The rejection loop ran past its iteration cap; the envelope is broken.
class SamplerStalled : public std::runtime_error {
 public:
  SamplerStalled(const std::string& what, SampleStats stats)
      : std::runtime_error(what), stats_(stats) {}
  [[nodiscard]] const SampleStats& stats() const { return stats_; }

 private:
  SampleStats stats_;
};

enum class LoopKind { plain, squeezed };

inline constexpr std::uint64_t kDefaultIterationCap = 1'000'000;

/// Marsaglia-Tsang gamma variate, shape >= 1, parameterized by rate.
template <VariateSource Rng>
double gamma_variate(double shape, double rate, Rng& rng) {
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  while (true) {
    const double z = rng.normal();
    const double v_cbrt = 1.0 + c * z;
    if (v_cbrt <= 0.0) continue;
    const double v = v_cbrt * v_cbrt * v_cbrt;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2 || std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) {
      return d * v / rate;
    }
  }
}

/// Gamma(shape, rate) conditioned on x >= lower, by redrawing. Only
/// sensible when the retained tail carries most of the mass.
template <VariateSource Rng>
double truncated_gamma_variate(double shape, double rate, double lower, Rng& rng) {
  while (true) {
    const double x = gamma_variate(shape, rate, rng);
    if (x >= lower) return x;
  }
}

namespace detail {

// Quantities fixed for a given envelope, hoisted out of the loop.
struct LoopConstants {
  double inv_eta;
  double slope;  // beta - beta0
  double alpha;
  double epsilon;
  double kappa0;
  double log_kappa0_shift;  // log(kappa0 + epsilon)
  double c5;                // log I0(kappa0) less the exactness guard
  double shape;
  double rate;

  LoopConstants(const PosteriorParams& post, const Envelope& env)
      : inv_eta(1.0 / post.eta),
        slope(env.beta - post.beta0),
        alpha(env.alpha),
        epsilon(env.epsilon),
        kappa0(env.kappa0),
        log_kappa0_shift(std::log(env.kappa0 + env.epsilon)),
        c5(env.log_i0_kappa0 - env.guard()),
        shape(env.proposal_shape(post)),
        rate(env.proposal_rate(post)) {}

  // Accept iff v < -log I0(kappa). Shared by both loops so their decisions
  // are computed from identical floating-point expressions.
  [[nodiscard]] double v(double kappa, double u) const {
    const double log_ratio = alpha == 0.0 ? 0.0 : alpha * (std::log(kappa + epsilon) - log_kappa0_shift);
    return std::log(u) * inv_eta - slope * (kappa - kappa0) + log_ratio - c5;
  }
};

inline std::string stall_message(const PosteriorParams& post, const Envelope& env, std::uint64_t cap) {
  std::ostringstream os;
  os.precision(17);
  os << "rejection loop exceeded " << cap << " proposals (eta=" << post.eta << ", beta0=" << post.beta0
     << ", alpha=" << env.alpha << ", beta=" << env.beta << ", epsilon=" << env.epsilon << ")";
  return os.str();
}

}  // namespace detail

/// Exact draw from the target by rejection from the shifted gamma envelope.
/// Evaluates log I0 at every proposal that survives truncation.
template <VariateSource Rng>
double sample_kappa(const PosteriorParams& post, const Envelope& env, Rng& rng, SampleStats& stats,
                    std::uint64_t cap = kDefaultIterationCap) {
  const detail::LoopConstants lc(post, env);
  for (std::uint64_t it = 0; it < cap; ++it) {
    ++stats.proposals;
    const double x = gamma_variate(lc.shape, lc.rate, rng);
    if (x < lc.epsilon) {
      ++stats.truncation_rejects;
      continue;
    }
    const double kappa = x - lc.epsilon;
    const double u = rng.uniform();
    const double v = lc.v(kappa, u);
    ++stats.bessel_evals;
    if (v < -log_bessel_i0(kappa)) {
      ++stats.accepted;
      return kappa;
    }
    ++stats.loop_rejects;
  }
  throw SamplerStalled(detail::stall_message(post, env, cap), stats);
}

/// Same decisions as sample_kappa on the same stream, but brackets log I0
/// between  kappa - log(2 pi kappa)/2  (valid for kappa > 0.259) and that
/// value plus log(1 + 1/(2 kappa)), so most iterations skip the Bessel call.
template <VariateSource Rng>
double sample_kappa_squeezed(const PosteriorParams& post, const Envelope& env, Rng& rng,
                             SampleStats& stats, std::uint64_t cap = kDefaultIterationCap) {
  const detail::LoopConstants lc(post, env);
  constexpr double two_pi = 2.0 * std::numbers::pi;
  for (std::uint64_t it = 0; it < cap; ++it) {
    ++stats.proposals;
    const double x = gamma_variate(lc.shape, lc.rate, rng);
    if (x < lc.epsilon) {
      ++stats.truncation_rejects;
      continue;
    }
    const double kappa = x - lc.epsilon;
    const double c6 = 0.5 * std::log(two_pi * kappa) - kappa;
    const double u = rng.uniform();
    const double v = lc.v(kappa, u);
    if (kappa < 0.258 || v < c6) {
      if (v < c6 - std::log1p(0.5 / kappa)) {
        ++stats.squeeze_accepts;
        ++stats.accepted;
        return kappa;
      }
      ++stats.bessel_evals;
      if (v < -log_bessel_i0(kappa)) {
        ++stats.accepted;
        return kappa;
      }
    } else {
      ++stats.squeeze_rejects;
    }
    ++stats.loop_rejects;
  }
  throw SamplerStalled(detail::stall_message(post, env, cap), stats);
}

template <VariateSource Rng>
double sample_kappa(const PosteriorParams& post, const Envelope& env, LoopKind loop, Rng& rng,
                    SampleStats& stats) {
  return loop == LoopKind::plain ? sample_kappa(post, env, rng, stats)
                                 : sample_kappa_squeezed(post, env, rng, stats);
}

struct Batch {
  std::vector<double> kappa;
  SampleStats stats;
  Envelope envelope;
};

/// Tunes once with approx_tune, then draws n samples.
template <VariateSource Rng>
Batch sample_batch(const PosteriorParams& post, std::size_t n, LoopKind loop, LambertMode mode, Rng& rng) {
  if (n == 0) throw DomainError("sample_batch: n must be at least 1");
  Batch out;
  out.envelope = approx_tune(post, mode);
  out.kappa.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    out.kappa.push_back(sample_kappa(post, out.envelope, loop, rng, out.stats));
  }
  return out;
}

}  // namespace besselexp

#endif  // BESSELEXP_SAMPLER_HPP
