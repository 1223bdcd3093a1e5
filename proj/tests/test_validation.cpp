#include <algorithm>
#include <cmath>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "besselexp/validation.hpp"

using namespace besselexp;

TEST(CdfTable, Endpoints) {
  for (const PosteriorParams post : {PosteriorParams{1.0, 0.0}, PosteriorParams{100.0, -0.9},
                                     PosteriorParams{5.0, 5.0}}) {
    const auto t = quadrature_cdf(post);
    EXPECT_EQ(t.cdf(0.0), 0.0);
    EXPECT_NEAR(t.cdf(t.cutoff()), 1.0, 1e-10);
    EXPECT_EQ(t.cdf(2 * t.cutoff()), 1.0);
    for (std::size_t i = 1; i < t.nodes().size(); ++i) {
      EXPECT_GE(t.nodes()[i].cdf, t.nodes()[i - 1].cdf);
    }
  }
}

TEST(CdfTable, MassAgreesWithNormalizer) {
  for (const PosteriorParams post : {PosteriorParams{1.0, 5.0}, PosteriorParams{10.0, -0.5},
                                     PosteriorParams{100.0, 0.0}}) {
    EXPECT_NEAR(quadrature_cdf(post).log_mass(), log_normalizer(post), 1e-8) << post.eta << " " << post.beta0;
  }
}

TEST(CdfTable, QuantileInvertsCdf) {
  const auto t = quadrature_cdf({10.0, -0.3});
  for (double p = 0.001; p < 1.0; p += 0.0371) {
    EXPECT_NEAR(t.cdf(t.quantile(p)), p, 1e-12);
  }
}

TEST(CdfTable, MedianMatchesSampler) {
  const PosteriorParams post{1.0, 0.0};
  const auto t = quadrature_cdf(post);
  const double med = t.quantile(0.5);
  RngStream rng(41);
  auto xs = sample_batch(post, 100'000, LoopKind::squeezed, LambertMode::winitzki, rng).kappa;
  std::nth_element(xs.begin(), xs.begin() + 50'000, xs.end());
  const double density = std::exp(log_unnormalized_density(post, med) - t.log_mass());
  const double se = 1.0 / (2.0 * density * std::sqrt(100'000.0));
  EXPECT_NEAR(xs[50'000], med, 4 * se);
}

TEST(Kolmogorov, KnownSurvivalValues) {
  EXPECT_NEAR(kolmogorov_survival(1.0), 0.26999967167735456, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(0.5), 0.96394524366487511, 1e-12);
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.04946, 1e-4);
  EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
  // The two series agree where they meet.
  EXPECT_NEAR(kolmogorov_survival(std::nextafter(1.18, 0.0)), kolmogorov_survival(1.18), 1e-12);
}

TEST(KsTest, UniformGridStatistic) {
  std::vector<double> grid;
  for (int i = 0; i < 100; ++i) grid.push_back((i + 0.5) / 100.0);
  const auto r = ks_test(grid, [](double u) { return u; });
  EXPECT_NEAR(r.statistic, 1.0 / 200.0, 1e-15);
}

TEST(KsTest, NullCalibrationByInverseTransform) {
  const auto t = quadrature_cdf({5.0, 0.2});
  RngStream rng(42);
  int passes = 0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> xs(2000);
    for (auto& x : xs) x = t.quantile(rng.uniform());
    if (ks_test(xs, t).p_value > 0.01) ++passes;
  }
  EXPECT_GE(passes, 98);
}

TEST(KsTest, DetectsProposalInsteadOfTarget) {
  const PosteriorParams post{1.0, 0.0};
  const auto env = approx_tune(post);
  RngStream rng(43);
  std::vector<double> xs(100'000);
  for (auto& x : xs) {
    x = truncated_gamma_variate(env.proposal_shape(post), env.proposal_rate(post), env.epsilon, rng) - env.epsilon;
  }
  EXPECT_LT(ks_test(xs, quadrature_cdf(post)).p_value, 0.01);
}

TEST(Efficiency, GridIsInterior) {
  const auto g = beta0_grid(200);
  ASSERT_EQ(g.size(), 200u);
  EXPECT_GT(g.front(), -1.0);
  EXPECT_LT(g.back(), 1.0);
  EXPECT_NEAR(g[66], -1.0 / 3.0, 1e-15);
}

TEST(Efficiency, EtaTenCurve) {
  const auto curves = efficiency_sweep({10.0}, 200);
  const auto& pts = curves.front().points;
  const auto worst = std::min_element(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.eff_approx < b.eff_approx;
  });
  EXPECT_GE(worst->eff_approx, 0.7);
  EXPECT_LT(std::abs(worst->beta0), 0.25);
  for (const auto& p : pts) EXPECT_GE(p.eff_oracle, p.eff_approx - 1e-6) << p.beta0;
}

TEST(Efficiency, LargeEtaAwayFromZero) {
  SweepOptions opt;
  const auto pt = efficiency_point({100.0, 0.9}, opt, RngStream(1));
  EXPECT_LE(pt.eff_oracle - pt.eff_approx, 0.02);
}

TEST(Efficiency, RefinedGridSharesPoints) {
  SweepOptions opt;
  opt.jobs = 4;
  const auto coarse = efficiency_sweep({1.0, 100.0}, 200, opt);
  const auto fine = efficiency_sweep({1.0, 100.0}, 2000, opt);
  for (std::size_t j = 0; j < 2; ++j) {
    // The grids meet at beta0 = -1/3 and 1/3.
    double coarse_min = 1.0;
    double fine_min = 1.0;
    for (std::size_t k : {1u, 2u}) {
      coarse_min = std::min(coarse_min, coarse[j].points[67 * k - 1].eff_approx);
      fine_min = std::min(fine_min, fine[j].points[667 * k - 1].eff_approx);
      EXPECT_NEAR(coarse[j].points[67 * k - 1].beta0, fine[j].points[667 * k - 1].beta0, 1e-15);
    }
    EXPECT_NEAR(coarse_min, fine_min, 1e-9);
  }
}

TEST(Efficiency, JobsDoNotChangeResults) {
  SweepOptions one;
  one.empirical = true;
  one.proposals = 2000;
  one.seed = 5;
  SweepOptions many = one;
  many.jobs = 3;
  const auto a = efficiency_sweep({5.0}, 12, one);
  const auto b = efficiency_sweep({5.0}, 12, many);
  for (std::size_t i = 0; i < 12; ++i) {
    EXPECT_EQ(a[0].points[i].eff_empirical, b[0].points[i].eff_empirical);
    EXPECT_EQ(a[0].points[i].eff_oracle, b[0].points[i].eff_oracle);
  }
}

TEST(Efficiency, CsvLayout) {
  EfficiencyCurve c;
  c.eta = 1.0;
  c.points = {{-0.5, 0.81234567891, 0.9, 0.8, 0.01}};
  std::ostringstream a;
  write_efficiency_csv(a, c);
  EXPECT_EQ(a.str(), "beta0,eff_approx,eff_oracle\n-0.5,0.812345679,0.9\n");
  c.has_empirical = true;
  std::ostringstream b;
  write_efficiency_csv(b, c);
  EXPECT_EQ(b.str(), "beta0,eff_approx,eff_oracle,eff_empirical,se\n-0.5,0.812345679,0.9,0.8,0.01\n");
}

TEST(Errata, NormalizingConstantBelongsToI0Numerator) {
  const auto rep = adjudicate_errata();
  EXPECT_EQ(rep.normalization_winner, "A = sqrt(beta0^2 - 1) normalizes exp(-beta0 k) * I0(k)");
  EXPECT_LT(rep.normalization_winner_residual, 1e-6);
  for (const auto& c : rep.normalization) {
    EXPECT_GT(c.residual_sqrt_reciprocal, 1e-2);
    EXPECT_GT(c.residual_invsqrt_reciprocal, 1e-2);
  }
}

TEST(Errata, GammaLimitRateIsBetaPlusOne) {
  const auto rep = adjudicate_errata();
  EXPECT_EQ(rep.gamma_winner, "rate eta * (beta0 + 1)");
  EXPECT_LT(rep.gamma_winner_residual, 1e-6);
}

TEST(Errata, Deterministic) { EXPECT_EQ(adjudicate_errata().text, adjudicate_errata().text); }

TEST(Bench, RateAndConservation) {
  RngStream rng(44);
  BenchOptions opt;
  opt.random_beta0 = true;
  const auto r = throughput_bench({10.0, 0.0}, LoopKind::squeezed, 0.2, rng, opt);
  EXPECT_GT(r.samples_per_second, 0.0);
  EXPECT_TRUE(r.stats.conserved());
  EXPECT_EQ(r.stats.accepted, r.samples);
  EXPECT_THROW(throughput_bench({10.0, 0.0}, LoopKind::plain, 0.01, rng), DomainError);
}

TEST(Bench, SteadyStateRate) {
  // Interleaved runs and medians, so drift in machine load hits both lengths.
  std::vector<double> short_rates;
  std::vector<double> long_rates;
  for (int i = 0; i < 5; ++i) {
    RngStream a(45 + i);
    RngStream b(45 + i);
    short_rates.push_back(throughput_bench({10.0, 0.5}, LoopKind::squeezed, 0.3, a).samples_per_second);
    long_rates.push_back(throughput_bench({10.0, 0.5}, LoopKind::squeezed, 0.6, b).samples_per_second);
  }
  std::sort(short_rates.begin(), short_rates.end());
  std::sort(long_rates.begin(), long_rates.end());
  EXPECT_LT(std::abs(long_rates[2] / short_rates[2] - 1.0), 0.1);
}
