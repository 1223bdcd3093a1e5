#ifndef BESSELEXP_VON_MISES_HPP
#define BESSELEXP_VON_MISES_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <sstream>
#include <vector>

#include "besselexp/errors.hpp"
#include "besselexp/rng.hpp"
#include "besselexp/sampler.hpp"
#include "besselexp/special_functions.hpp"
#include "besselexp/tuning.hpp"

namespace besselexp {

/// Wraps an angle into [-pi, pi).
inline double wrap_angle(double theta) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::fmod(theta + std::numbers::pi, two_pi);
  if (w < 0.0) w += two_pi;
  w -= std::numbers::pi;
  return w >= std::numbers::pi ? -std::numbers::pi : w;
}

struct VonMisesParams {
  double mu = 0.0;
  double kappa = 0.0;
};

/// Conjugate prior exp(R0 kappa cos(mu - mu0)) I0(kappa)^(-a) exp(-b kappa).
/// R0 = 0 leaves mu flat and gives the kappa-only prior.
struct ConjugatePrior {
  double a = 0.0;
  double b = 0.0;
  double mu0 = 0.0;
  double r0 = 0.0;
};

struct GibbsDraw {
  double mu = 0.0;
  double kappa = 0.0;
};

struct GibbsChain {
  std::vector<GibbsDraw> draws;
  std::size_t burn_in = 0;
  std::uint64_t seed = 0;
  SampleStats stats;
};

inline double von_mises_log_density(double theta, const VonMisesParams& p) {
  return p.kappa * std::cos(theta - p.mu) - std::log(2.0 * std::numbers::pi) - log_bessel_i0(p.kappa);
}

/// Best-Fisher wrapped-Cauchy rejection sampler. Returns an angle in [-pi, pi).
template <VariateSource Rng>
double sample_von_mises(const VonMisesParams& p, Rng& rng) {
  if (!(p.kappa >= 0.0)) throw DomainError(detail::describe("sample_von_mises kappa", p.kappa));
  if (p.kappa < 1e-12) return wrap_angle(2.0 * std::numbers::pi * rng.uniform() - std::numbers::pi);
  const double k = p.kappa;
  const double s = std::sqrt(1.0 + 4.0 * k * k);
  const double tau = 1.0 + s;
  // rho = (tau - sqrt(2 tau)) / (2 kappa), rearranged to avoid cancellation at small kappa.
  const double rho = 2.0 * k * tau / ((s + 1.0) * (tau + std::sqrt(2.0 * tau)));
  const double r = (1.0 + rho * rho) / (2.0 * rho);
  while (true) {
    const double u1 = rng.uniform();
    const double u2 = rng.uniform();
    const double u3 = rng.uniform();
    const double z = std::cos(std::numbers::pi * u1);
    const double f = (1.0 + r * z) / (r + z);
    const double c = k * (r - f);
    if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
      const double dev = std::acos(std::clamp(f, -1.0, 1.0));
      return wrap_angle(p.mu + (u3 > 0.5 ? dev : -dev));
    }
  }
}

/// eta = a + n, beta0 = (b - sum cos(theta_i - mu)) / (a + n).
///
/// Throws InvalidPosterior when a + n <= 0 or beta0 <= -1.
inline PosteriorParams posterior_hyperparams(std::span<const double> angles, double mu,
                                             const ConjugatePrior& prior) {
  const double eta = prior.a + static_cast<double>(angles.size());
  if (!(eta > 0.0)) throw InvalidPosterior("posterior requires a + n > 0");
  double cos_sum = 0.0;
  for (double t : angles) cos_sum += std::cos(t - mu);
  const PosteriorParams post{eta, (prior.b - cos_sum) / eta};
  if (!(post.beta0 > -1.0)) {
    std::ostringstream os;
    os.precision(17);
    os << "posterior beta0 = " << post.beta0 << " <= -1 is not normalizable"
       << " (data perfectly concentrated at mu, or b too small)";
    throw InvalidPosterior(os.str());
  }
  return post;
}

struct GibbsOptions {
  std::size_t iters = 1000;
  std::size_t burn_in = 0;
  double initial_kappa = 1.0;
  LambertMode lambert = LambertMode::winitzki;
};

/// Alternates mu | kappa (von Mises) and kappa | mu (Bessel exponential via
/// the squeezed rejection loop, re-tuned at every step). Only the draws after
/// burn-in are kept.
inline GibbsChain gibbs_sample(std::span<const double> angles, const ConjugatePrior& prior,
                               const GibbsOptions& opt, RngStream rng) {
  if (!(opt.iters > opt.burn_in)) throw DomainError("gibbs_sample: iters must exceed burn_in");
  if (!(prior.a >= 0.0) || !(prior.r0 >= 0.0)) {
    throw DomainError("gibbs_sample: prior needs a >= 0 and R0 >= 0");
  }
  double c = prior.r0 * std::cos(prior.mu0);
  double s = prior.r0 * std::sin(prior.mu0);
  for (double t : angles) {
    c += std::cos(t);
    s += std::sin(t);
  }
  const double mean_dir = std::atan2(s, c);
  const double resultant = std::hypot(s, c);

  GibbsChain chain;
  chain.burn_in = opt.burn_in;
  chain.seed = rng.seed();
  chain.draws.reserve(opt.iters - opt.burn_in);
  double kappa = opt.initial_kappa;
  for (std::size_t it = 0; it < opt.iters; ++it) {
    const double mu = sample_von_mises({mean_dir, kappa * resultant}, rng);
    ConjugatePrior step = prior;
    step.b = prior.b - prior.r0 * std::cos(mu - prior.mu0);
    const auto post = posterior_hyperparams(angles, mu, step);
    const auto env = approx_tune(post, opt.lambert);
    kappa = sample_kappa_squeezed(post, env, rng, chain.stats);
    if (it >= opt.burn_in) chain.draws.push_back({mu, kappa});
  }
  return chain;
}

}  // namespace besselexp

#endif  // BESSELEXP_VON_MISES_HPP
