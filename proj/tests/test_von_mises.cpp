#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "besselexp/validation.hpp"
#include "besselexp/von_mises.hpp"

using namespace besselexp;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kDraws = 100'000;

std::vector<double> draw(const VonMisesParams& p, std::size_t n, std::uint64_t seed) {
  RngStream rng(seed);
  std::vector<double> out(n);
  for (auto& x : out) x = sample_von_mises(p, rng);
  return out;
}

// CDF of the von Mises(0, kappa) law on [-pi, pi), by quadrature of the density.
double vm_cdf(double theta, double kappa) {
  quadrature::Options opt;
  opt.rel_tol = 1e-12;
  opt.abs_tol = 1e-15;
  if (theta <= -kPi) return 0.0;
  return quadrature::integrate([kappa](double t) { return std::exp(von_mises_log_density(t, {0.0, kappa})); },
                               {-kPi, theta}, opt)
      .value;
}

double mle_kappa(double rbar) {
  double lo = 0.0;
  double hi = 1.0;
  while (bessel_ratio(hi) < rbar) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bessel_ratio(mid) < rbar ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST(WrapAngle, Range) {
  EXPECT_EQ(wrap_angle(0.0), 0.0);
  EXPECT_NEAR(wrap_angle(3 * kPi / 2), -kPi / 2, 1e-15);
  EXPECT_NEAR(wrap_angle(-3 * kPi / 2), kPi / 2, 1e-15);
  EXPECT_EQ(wrap_angle(kPi), -kPi);
  for (double t = -20.0; t < 20.0; t += 0.37) {
    const double w = wrap_angle(t);
    EXPECT_GE(w, -kPi);
    EXPECT_LT(w, kPi);
    EXPECT_NEAR(std::remainder(w - t, 2 * kPi), 0.0, 1e-12);
  }
}

TEST(VonMisesDensity, KnownValues) {
  EXPECT_NEAR(von_mises_log_density(1.3, {0.2, 0.0}), -std::log(2 * kPi), 1e-15);
  EXPECT_NEAR(von_mises_log_density(0.4, {0.4, 1.0}), 1.0 - std::log(2 * kPi) - std::log(1.2660658777520084),
              1e-15);
}

TEST(VonMisesDensity, Normalized) {
  for (double k : {0.5, 5.0, 50.0}) {
    const auto r = quadrature::integrate([k](double t) { return std::exp(von_mises_log_density(t, {0.3, k})); },
                                         {-kPi, -1.0, 0.0, 0.3, 1.0, kPi});
    EXPECT_NEAR(r.value, 1.0, 1e-9) << k;
  }
}

TEST(VonMisesSampler, ZeroConcentrationIsUniform) {
  auto xs = draw({0.0, 0.0}, kDraws, 31);
  for (auto& x : xs) x = (x + kPi) / (2 * kPi);
  EXPECT_GT(ks_test(xs, [](double u) { return std::clamp(u, 0.0, 1.0); }).p_value, 0.01);
}

TEST(VonMisesSampler, MomentsAtKappaTwo) {
  const auto xs = draw({0.0, 2.0}, kDraws, 32);
  double c = 0.0;
  double s = 0.0;
  double c2 = 0.0;
  double s2 = 0.0;
  for (double x : xs) {
    c += std::cos(x);
    s += std::sin(x);
    c2 += std::cos(x) * std::cos(x);
    s2 += std::sin(x) * std::sin(x);
  }
  const double n = static_cast<double>(kDraws);
  const double mc = c / n;
  const double ms = s / n;
  const double se_c = std::sqrt((c2 / n - mc * mc) / n);
  const double se_s = std::sqrt((s2 / n - ms * ms) / n);
  EXPECT_NEAR(ms, 0.0, 4 * se_s);
  EXPECT_NEAR(std::atan2(ms, mc), 0.0, 4 * se_s / mc);
  EXPECT_NEAR(mc, bessel_ratio(2.0), 4 * se_c);
}

TEST(VonMisesSampler, MatchesDensityCdf) {
  for (double k : {0.01, 0.7, 2.0, 30.0}) {
    auto xs = draw({0.0, k}, 20000, 33);
    std::sort(xs.begin(), xs.end());
    EXPECT_GT(ks_test(xs, [k](double t) { return vm_cdf(t, k); }).p_value, 0.01) << k;
  }
}

TEST(VonMisesSampler, LocationShift) {
  auto shifted = draw({1.0, 2.0}, kDraws, 34);
  for (auto& x : shifted) x = wrap_angle(x - 1.0);
  EXPECT_GT(ks_test(shifted, [](double t) { return vm_cdf(t, 2.0); }).p_value, 0.01);
}

TEST(VonMisesSampler, RejectsNegativeKappa) {
  RngStream rng(1);
  EXPECT_THROW(sample_von_mises({0.0, -1.0}, rng), DomainError);
}

TEST(Posterior, PriorOnly) {
  const auto p = posterior_hyperparams({}, 0.0, {2.0, 3.0, 0.0, 0.0});
  EXPECT_EQ(p.eta, 2.0);
  EXPECT_EQ(p.beta0, 1.5);
}

TEST(Posterior, ConcentratedDataIsRejected) {
  const std::vector<double> same(10, 0.25);
  EXPECT_THROW(posterior_hyperparams(same, 0.25, {0.0, 0.0, 0.0, 0.0}), InvalidPosterior);
  EXPECT_THROW(posterior_hyperparams({}, 0.0, {0.0, 1.0, 0.0, 0.0}), InvalidPosterior);
}

TEST(Posterior, BalancedAngles) {
  const std::vector<double> four{0.0, kPi / 2, kPi, 3 * kPi / 2};
  const auto p = posterior_hyperparams(four, 0.0, {1.0, 0.5, 0.0, 0.0});
  EXPECT_EQ(p.eta, 5.0);
  EXPECT_NEAR(p.beta0, 0.1, 1e-15);
}

// The kappa full conditional written out from prior times likelihood must
// differ from log_unnormalized_density by a constant. The variant that divides
// the data term by n instead of a + n does not.
TEST(Posterior, DivisorFromConjugacy) {
  const std::vector<double> data{0.3, -0.4, 1.1, 0.2, 2.5, -0.1, 0.6};
  const ConjugatePrior prior{3.0, 1.5, 0.0, 0.0};
  const double mu = 0.2;
  const double n = static_cast<double>(data.size());
  double sum_cos = 0.0;
  for (double t : data) sum_cos += std::cos(t - mu);
  const auto full = [&](double k) { return -(prior.a + n) * log_bessel_i0(k) - prior.b * k + k * sum_cos; };
  const auto post = posterior_hyperparams(data, mu, prior);
  const PosteriorParams alt{prior.a + n, prior.b / (prior.a + n) - sum_cos / n};
  const double c = full(0.5) - log_unnormalized_density(post, 0.5);
  const double c_alt = full(0.5) - log_unnormalized_density(alt, 0.5);
  double drift_alt = 0.0;
  for (double k : {0.1, 1.0, 3.0, 10.0}) {
    EXPECT_NEAR(full(k) - log_unnormalized_density(post, k), c, 1e-12) << k;
    drift_alt = std::max(drift_alt, std::abs(full(k) - log_unnormalized_density(alt, k) - c_alt));
  }
  EXPECT_GT(drift_alt, 1.0);
}

TEST(Gibbs, RecoversSyntheticParameters) {
  const auto data = draw({0.7, 4.0}, 200, 35);
  GibbsOptions opt;
  opt.iters = 6000;
  opt.burn_in = 1000;
  const auto chain = gibbs_sample(data, {}, opt, RngStream(36));
  ASSERT_EQ(chain.draws.size(), 5000u);
  std::vector<double> mu;
  std::vector<double> kappa;
  for (const auto& d : chain.draws) {
    mu.push_back(d.mu);
    kappa.push_back(d.kappa);
  }
  double m = 0.0;
  for (double x : mu) m += x;
  m /= mu.size();
  double v = 0.0;
  for (double x : mu) v += (x - m) * (x - m);
  const double sd = std::sqrt(v / (mu.size() - 1));
  EXPECT_NEAR(m, 0.7, 3 * sd);
  std::sort(kappa.begin(), kappa.end());
  EXPECT_LE(kappa[125], 4.0);
  EXPECT_GE(kappa[4874], 4.0);
}

TEST(Gibbs, KappaMeanApproachesMle) {
  const auto data = draw({-1.2, 3.0}, 5000, 37);
  double c = 0.0;
  double s = 0.0;
  for (double t : data) {
    c += std::cos(t);
    s += std::sin(t);
  }
  const double mle = mle_kappa(std::hypot(c, s) / data.size());
  GibbsOptions opt;
  opt.iters = 2200;
  opt.burn_in = 200;
  const auto chain = gibbs_sample(data, {}, opt, RngStream(38));
  double m = 0.0;
  for (const auto& d : chain.draws) m += d.kappa;
  m /= chain.draws.size();
  EXPECT_NEAR(m, mle, 0.03 * mle);
}

TEST(Gibbs, Bookkeeping) {
  const std::vector<double> data{0.1, 0.2, -0.3, 1.0};
  GibbsOptions opt;
  opt.iters = 11;
  opt.burn_in = 10;
  const auto chain = gibbs_sample(data, {1.0, 1.0, 0.0, 0.5}, opt, RngStream(39));
  EXPECT_EQ(chain.draws.size(), 1u);
  EXPECT_EQ(chain.burn_in, 10u);
  EXPECT_EQ(chain.seed, 39u);
  EXPECT_TRUE(chain.stats.conserved());
  opt.burn_in = 11;
  EXPECT_THROW(gibbs_sample(data, {}, opt, RngStream(39)), DomainError);
}

TEST(Gibbs, DeterministicForSeed) {
  const std::vector<double> data{0.1, 0.2, -0.3, 1.0, 0.5};
  GibbsOptions opt;
  opt.iters = 50;
  const auto a = gibbs_sample(data, {}, opt, RngStream(40));
  const auto b = gibbs_sample(data, {}, opt, RngStream(40));
  for (std::size_t i = 0; i < a.draws.size(); ++i) {
    EXPECT_EQ(a.draws[i].mu, b.draws[i].mu);
    EXPECT_EQ(a.draws[i].kappa, b.draws[i].kappa);
  }
}

TEST(Gibbs, StartingPointDoesNotMatter) {
  const auto data = draw({0.7, 4.0}, 200, 35);
  GibbsOptions opt;
  opt.iters = 6000;
  opt.burn_in = 1000;
  const auto summary = [&](double init) {
    opt.initial_kappa = init;
    const auto chain = gibbs_sample(data, {}, opt, RngStream(init < 1.0 ? 41 : 42));
    std::vector<double> mu;
    std::vector<double> kappa;
    for (const auto& d : chain.draws) {
      mu.push_back(d.mu);
      kappa.push_back(d.kappa);
    }
    return std::pair{mu, kappa};
  };
  const auto [mu_lo, kappa_lo] = summary(0.01);
  const auto [mu_hi, kappa_hi] = summary(100.0);
  const auto mean_se = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= v.size();
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::pair{m, std::sqrt(s / (v.size() - 1) / v.size())};
  };
  for (const auto& [a, b] : {std::pair{mu_lo, mu_hi}, std::pair{kappa_lo, kappa_hi}}) {
    const auto [ma, sa] = mean_se(a);
    const auto [mb, sb] = mean_se(b);
    EXPECT_LT(std::abs(ma - mb), 3.0 * std::hypot(sa, sb));
  }
}
