#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "latentbandit/analysis.hpp"
#include "latentbandit/policies.hpp"
#include "latentbandit/sim.hpp"
#include "latentbandit/verify.hpp"

namespace lb = latentbandit;

namespace {

// Plain Monte Carlo argmax frequencies, independent of the library's
// quadrature and of its sharded estimator.
std::vector<double> argmax_frequencies(const lb::BetaPosterior& post, std::size_t n,
                                       std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::vector<double> freq(post.k(), 0.0);
  for (std::size_t d = 0; d < n; ++d) {
    std::size_t best = 0;
    double best_v = -1.0;
    for (std::size_t i = 0; i < post.k(); ++i) {
      const double x = std::gamma_distribution<double>(post.s(i))(gen);
      const double y = std::gamma_distribution<double>(post.f(i))(gen);
      const double v = x / (x + y);
      if (v > best_v) {
        best_v = v;
        best = i;
      }
    }
    freq[best] += 1.0;
  }
  for (double& f : freq) f /= static_cast<double>(n);
  return freq;
}

lb::BetaPosterior random_posterior(lb::Rng& gen, std::size_t k_max, std::size_t count_max) {
  const std::size_t k = 2 + lb::uniform_index(k_max - 1, gen);
  std::vector<double> s(k), f(k);
  for (std::size_t i = 0; i < k; ++i) {
    s[i] = static_cast<double>(1 + lb::uniform_index(count_max, gen));
    f[i] = static_cast<double>(1 + lb::uniform_index(count_max, gen));
  }
  return lb::BetaPosterior(std::move(s), std::move(f));
}

TEST(OptimalActionDist, SymmetricPosteriorIsUniform) {
  const auto alpha = lb::optimal_action_dist(lb::BetaPosterior(5));
  for (double a : alpha.probs()) EXPECT_NEAR(a, 0.2, 1e-6);
}

TEST(OptimalActionDist, ClosedFormTwoArmCase) {
  // int_0^1 2x * x dx = 2/3
  const auto alpha = lb::optimal_action_dist(lb::BetaPosterior({2.0, 1.0}, {1.0, 1.0}));
  EXPECT_NEAR(alpha[0], 2.0 / 3.0, 1e-6);
  EXPECT_NEAR(alpha[1], 1.0 / 3.0, 1e-6);
}

TEST(OptimalActionDist, NormalisedAndHandlesPeakedPosteriors) {
  lb::Rng gen(1);
  for (int rep = 0; rep < 30; ++rep) {
    const auto post = random_posterior(gen, 5, 2000);
    const auto alpha = lb::optimal_action_dist(post);
    double sum = 0.0;
    for (double a : alpha.probs()) sum += a;
    EXPECT_NEAR(sum, 1.0, 1e-9);
  }
  const auto alpha = lb::optimal_action_dist(lb::BetaPosterior({1000.0, 1.0}, {1.0, 1000.0}));
  EXPECT_NEAR(alpha[0], 1.0, 1e-9);
  EXPECT_EQ(lb::optimal_action_dist(lb::BetaPosterior(1))[0], 1.0);
}

TEST(OptimalActionDist, AgreesWithMonteCarloArgmax) {
  lb::Rng gen(2);
  const std::size_t n = 400000;
  for (int rep = 0; rep < 20; ++rep) {
    const auto post = random_posterior(gen, 5, 10);
    const auto alpha = lb::optimal_action_dist(post);
    const auto freq = argmax_frequencies(post, n, 100 + rep);
    for (std::size_t i = 0; i < post.k(); ++i) {
      const double sigma = std::sqrt(alpha[i] * (1.0 - alpha[i]) / n);
      EXPECT_NEAR(freq[i], alpha[i], std::max(1e-3, 3.0 * sigma)) << "case " << rep << " arm " << i;
    }
  }
}

TEST(Entropy, Examples) {
  EXPECT_NEAR(lb::entropy(lb::PolicyDistribution::uniform(5)), std::log(5.0), 1e-15);
  EXPECT_NEAR(std::log(5.0), 1.60944, 1e-5);
  EXPECT_EQ(lb::entropy(lb::PolicyDistribution({0.0, 1.0, 0.0})), 0.0);
  EXPECT_NEAR(lb::entropy(lb::PolicyDistribution({0.5, 0.5})), std::numbers::ln2, 1e-15);
}

TEST(InfoQuantitiesMc, SingleArmHasNoUncertainty) {
  lb::Rng gen(3);
  const auto info = lb::info_quantities_mc(lb::BetaPosterior(std::vector<double>{3.0}, std::vector<double>{4.0}), 10000, gen);
  EXPECT_EQ(info.alpha[0], 1.0);
  EXPECT_NEAR(info.delta[0], 0.0, 1e-12);
  EXPECT_NEAR(info.h[0], 0.0, 1e-12);
}

TEST(InfoQuantitiesMc, ExchangeableArmsHaveEqualRegret) {
  lb::Rng gen(4);
  const auto info = lb::info_quantities_mc(lb::BetaPosterior(4), 400000, gen);
  for (std::size_t i = 1; i < 4; ++i)
    EXPECT_NEAR(info.delta[i], info.delta[0],
                3.0 * std::hypot(info.delta_se[i], info.delta_se[0]));
}

TEST(InfoQuantitiesMc, AlphaMatchesQuadrature) {
  lb::Rng gen(5);
  const auto info = lb::info_quantities_mc(lb::BetaPosterior({2.0, 1.0}, {1.0, 1.0}), 1000000, gen);
  const double sigma = std::sqrt((2.0 / 9.0) / 1e6);
  EXPECT_NEAR(info.alpha[0], 2.0 / 3.0, 3.0 * sigma);
  EXPECT_NEAR(info.alpha[1], 1.0 / 3.0, 3.0 * sigma);
  EXPECT_NEAR(info.alpha_se[0], sigma, 0.5 * sigma);
}

TEST(InfoQuantitiesMc, StructuralInvariants) {
  lb::Rng gen(6);
  for (int rep = 0; rep < 20; ++rep) {
    const auto post = random_posterior(gen, 5, 10);
    const auto info = lb::info_quantities_mc(post, 100000, gen);
    std::size_t best = 0;
    for (std::size_t i = 0; i < post.k(); ++i) {
      EXPECT_GE(info.h[i], 0.0);
      EXPECT_LE(info.h[i], std::numbers::ln2 + 3.0 * info.h_se[i]);
      if (info.defined[i]) { EXPECT_GE(info.cond_mean(i, i), post.posterior_mean(i) - 0.01); }
      if (post.posterior_mean(i) > post.posterior_mean(best)) best = i;
    }
    for (std::size_t i = 0; i < post.k(); ++i)
      EXPECT_LE(info.delta[best], info.delta[i] + 3.0 * std::hypot(info.delta_se[i], info.delta_se[best]));
  }
}

TEST(InfoQuantitiesMc, IndependentOfWorkerCount) {
  const lb::BetaPosterior post({3.0, 5.0, 2.0}, {4.0, 2.0, 2.0});
  lb::Rng a(7), b(7);
  const auto one = lb::info_quantities_mc(post, 50000, a, 1);
  const auto four = lb::info_quantities_mc(post, 50000, b, 4);
  EXPECT_EQ(one.alpha, four.alpha);
  EXPECT_EQ(one.h, four.h);
}

TEST(InfoQuantitiesMc, RejectsTooFewSamples) {
  lb::Rng gen(8);
  EXPECT_THROW(lb::info_quantities_mc(lb::BetaPosterior(2), 9999, gen), lb::InvalidConfig);
}

TEST(InfoQuantitiesMc, ExtremePosteriorFlagsEmptyCells) {
  lb::Rng gen(9);
  const auto info = lb::info_quantities_mc(lb::BetaPosterior({1e6, 1.0}, {1.0, 1e6}), 10000, gen);
  EXPECT_EQ(info.undefined_cells, 1u);
  EXPECT_FALSE(info.defined[1]);
  EXPECT_TRUE(std::isnan(info.cond_mean(0, 1)));
  EXPECT_TRUE(std::isfinite(info.h[0]));
}

// Symmetric posterior: Delta is constant across arms, and alpha^T Delta is
// E[max theta] - E[theta] (1/6 for two uniform arms), not zero.
TEST(CheckInfoRatio, SymmetricPosteriorPasses) {
  lb::Rng gen(10);
  const auto r = lb::check_info_ratio(lb::BetaPosterior(2), lb::make_graph(lb::GraphKind::empty, 2), 1000000, gen);
  EXPECT_NEAR(r.lhs, 1.0 / 36.0, 3.0 * r.lhs_se + 1e-4);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.inconclusive);
  EXPECT_LE(r.lhs, r.rhs);

  for (auto kind : {lb::GraphKind::complete, lb::GraphKind::total_order}) {
    const auto rr = lb::check_info_ratio(lb::BetaPosterior(4), lb::make_graph(kind, 4), 100000, gen);
    EXPECT_TRUE(rr.pass);
  }
}

TEST(CheckInfoRatio, TwoArmEmptyGraphPasses) {
  lb::Rng gen(11);
  const auto r = lb::check_info_ratio(lb::BetaPosterior({2.0, 1.0}, {1.0, 1.0}),
                                 lb::make_graph(lb::GraphKind::empty, 2), 1000000, gen);
  EXPECT_TRUE(r.pass);
  EXPECT_FALSE(r.inconclusive);
  EXPECT_NEAR(r.q_alpha, 2.0, 1e-12);
  const auto j = r.record().to_json();
  for (const char* key : {"check", "inputs_digest", "lhs", "rhs", "stderr", "pass"})
    EXPECT_TRUE(j.contains(key)) << key;
  EXPECT_EQ(j["check"], "info_ratio");
}

TEST(CheckInfoRatio, RandomPosteriorSuite) {
  lb::InfoRatioSuiteOptions opt;
  opt.seed = 5;
  opt.cases = 25;
  opt.samples = 200000;
  const auto r = lb::run_info_ratio_suite(opt);
  EXPECT_EQ(r.failures, 0u);
  EXPECT_EQ(r.reports.size(), 25u);
  for (const auto& rep : r.reports) EXPECT_GE(rep.margin, -3.0 * rep.stderr_);
}

TEST(RegretBoundValue, Arithmetic) {
  EXPECT_NEAR(lb::regret_bound_value(2000.0, std::log(5.0)), 40.11780044361979, 1e-10);
  EXPECT_NEAR(lb::regret_bound_value(5000.0, std::log(5.0)), 63.43181205897598, 1e-10);
  EXPECT_EQ(lb::regret_bound_value(0.0, std::log(5.0)), 0.0);
  EXPECT_EQ(lb::regret_bound_value(2000.0, 0.0), 0.0);
  EXPECT_THROW(lb::regret_bound_value(-1.0, 1.0), lb::InvalidConfig);
}

TEST(TsuBoundValue, MatchesIndependentArithmetic) {
  const double eps = 1.0 / std::sqrt(1000.0);
  const double h0 = std::log(5.0);
  const double value = lb::tsu_bound_value(1000, 5, eps, 2, h0);
  EXPECT_NEAR(value, 249.38374424423955, 1e-9);
  EXPECT_GT(value, lb::regret_bound_value(2000.0, h0));
  EXPECT_EQ(lb::tsu_bound_value(0, 5, eps, 2, h0), 0.0);
  EXPECT_THROW(lb::tsu_bound_value(1000, 5, 0.0, 2, h0), lb::InvalidConfig);
  std::vector<std::size_t> rounds(1000, 1);
  EXPECT_NEAR(lb::tsu_bound_value(rounds, 5, eps, h0), 192.68510682477324, 1e-9);
}

TEST(FlooredQBound, Arithmetic) {
  EXPECT_NEAR(lb::floored_q_bound(1.0, 5, 0.1), 4.0 * std::log(200.0), 1e-12);
  EXPECT_THROW(lb::floored_q_bound(1.0, 5, 0.5), lb::InvalidConfig);
  EXPECT_THROW(lb::floored_q_bound(1.0, 5, 0.0), lb::InvalidConfig);
}

TEST(PriorEntropy, UniformPriorGivesLogK) {
  EXPECT_NEAR(lb::prior_entropy(5), std::log(5.0), 1e-9);
}

// H(alpha_t) - H(alpha_{t+1}) summed over a TS-N trajectory telescopes and
// never exceeds the prior entropy.
TEST(EntropyTelescoping, TsnTrajectory) {
  const std::size_t k = 4, horizon = 600;
  lb::Rng gen(12);
  const auto env = lb::draw_environment(k, {}, gen);
  lb::GraphSequence graphs(lb::ErdosRenyiSpec{k, 0.0, 0.2, false}, horizon);
  lb::TsnPolicy policy(k);
  std::vector<std::uint8_t> y;
  std::vector<double> h{lb::entropy(lb::optimal_action_dist(policy.posterior()))};
  for (std::size_t t = 1; t <= horizon; ++t) {
    const auto& g = graphs.next(gen);
    const std::size_t arm = policy.select(t, gen);
    env.realize(gen, y);
    for (std::size_t a = 0; a < k; ++a)
      if (g.has_arc(arm, a)) policy.observe(a, y[a] != 0);
    if (t % 50 == 0) h.push_back(lb::entropy(lb::optimal_action_dist(policy.posterior())));
  }
  double telescoped = 0.0;
  for (std::size_t i = 0; i + 1 < h.size(); ++i) telescoped += h[i] - h[i + 1];
  EXPECT_NEAR(telescoped, h.front() - h.back(), 1e-12);
  EXPECT_LE(telescoped, h.front() + 1e-12);
  EXPECT_NEAR(h.front(), std::log(static_cast<double>(k)), 1e-9);
}

}  // namespace
