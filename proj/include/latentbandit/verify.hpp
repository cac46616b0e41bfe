#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latentbandit/analysis.hpp"
#include "latentbandit/graph.hpp"
#include "latentbandit/graph_metrics.hpp"
#include "latentbandit/sim.hpp"

namespace latentbandit {

// Randomised property suites: bounds on Q(pi, G), the information ratio
// inequality, and regret against its graph-dependent bound. Each suite is a
// pure function of its seed.

inline constexpr double kBoundSlack = 1e-9;

/// Random graph for property suites: K uniform in [k_min, k_max], density
/// uniform in [0, 1], orientation a fair coin.
template <class Gen>
FeedbackGraph random_test_graph(std::size_t k_min, std::size_t k_max, Gen& gen) {
  ErdosRenyiSpec er;
  er.k = k_min + uniform_index(k_max - k_min + 1, gen);
  er.p_low = er.p_high = uniform01(gen);
  er.directed = uniform01(gen) < 0.5;
  return sample_er_graph(er, gen);
}

/// Dirichlet(1) point; with probability 1/3 some coordinates are zeroed
/// first so that the pi(i) = 0 convention is exercised.
template <class Gen>
std::vector<double> random_simplex(std::size_t k, Gen& gen) {
  std::exponential_distribution<double> expo(1.0);
  std::vector<double> p(k);
  const bool sparse = k > 1 && uniform01(gen) < 1.0 / 3.0;
  double sum = 0.0;
  for (double& x : p) {
    x = expo(gen);
    if (sparse && uniform01(gen) < 0.5) x = 0.0;
    sum += x;
  }
  if (sum == 0.0) {
    p[uniform_index(k, gen)] = 1.0;
    return p;
  }
  for (double& x : p) x /= sum;
  return p;
}

/// Every coordinate at least eta: eta + (1 - K eta) * pi. Requires K eta <= 1.
inline std::vector<double> floor_distribution(std::span<const double> pi, double eta) {
  const double k = static_cast<double>(pi.size());
  std::vector<double> out(pi.size());
  for (std::size_t i = 0; i < pi.size(); ++i) out[i] = eta + (1.0 - k * eta) * pi[i];
  return out;
}

struct QBoundSuiteOptions {
  std::uint64_t seed = 1;
  std::size_t graphs = 1000;
  std::size_t dists_per_graph = 10;
  std::size_t k_min = 2;
  std::size_t k_max = 10;
  std::vector<double> etas{0.01, 0.05, 0.1};
  // Optional independent metric computation to compare against.
  std::function<std::optional<GraphMetrics>(const FeedbackGraph&)> cross_check;
};

struct QBoundSuiteResult {
  std::size_t graphs = 0;
  std::size_t q_checks = 0;
  std::size_t floored_checks = 0;
  std::size_t metric_cross_checks = 0;
  std::size_t violations_beta0 = 0;    // undirected: Q <= beta0
  std::size_t violations_mas = 0;      // Q <= mas
  std::size_t violations_chi = 0;      // Q <= chi
  std::size_t violations_floored = 0;   // min pi >= eta: Q <= 4 beta0 log(4K / (beta0 eta))
  std::size_t violations_ordering = 0; // beta0 <= mas, beta0 <= chi, undirected beta0 == mas
  std::size_t metric_mismatches = 0;
  double worst_ratio = 0.0;            // max over checks of Q / bound

  std::size_t total_violations() const {
    return violations_beta0 + violations_mas + violations_chi + violations_floored +
           violations_ordering + metric_mismatches;
  }
  bool pass() const { return total_violations() == 0; }
};

inline QBoundSuiteResult run_q_bound_suite(const QBoundSuiteOptions& opt) {
  QBoundSuiteResult res;
  Rng gen = make_stream(opt.seed, 0, "q-bounds");
  auto exceeds = [&](double q, double bound) {
    res.worst_ratio = std::max(res.worst_ratio, q / bound);
    return q > bound * (1.0 + kBoundSlack) + kBoundSlack;
  };
  for (std::size_t n = 0; n < opt.graphs; ++n) {
    const FeedbackGraph g = random_test_graph(opt.k_min, opt.k_max, gen);
    const GraphMetrics m = compute_metrics(g);
    ++res.graphs;
    if (m.beta0 > m.mas || m.beta0 > m.chi || m.mas > g.k() || m.chi > g.k() ||
        (g.is_symmetric() && m.beta0 != m.mas))
      ++res.violations_ordering;
    if (opt.cross_check) {
      if (auto expected = opt.cross_check(g)) {
        ++res.metric_cross_checks;
        if (*expected != m) ++res.metric_mismatches;
      }
    }
    const double beta0 = static_cast<double>(m.beta0);
    for (std::size_t d = 0; d < opt.dists_per_graph; ++d) {
      const auto pi = random_simplex(g.k(), gen);
      const double q = q_quantity(g, pi);
      ++res.q_checks;
      if (g.is_symmetric() && exceeds(q, beta0)) ++res.violations_beta0;
      if (exceeds(q, static_cast<double>(m.mas))) ++res.violations_mas;
      if (exceeds(q, static_cast<double>(m.chi))) ++res.violations_chi;
      for (double eta : opt.etas) {
        if (static_cast<double>(g.k()) * eta > 1.0) continue;
        const auto floored = floor_distribution(pi, eta);
        ++res.floored_checks;
        if (exceeds(q_quantity(g, floored), floored_q_bound(beta0, g.k(), eta)))
          ++res.violations_floored;
      }
    }
  }
  return res;
}

struct InfoRatioSuiteOptions {
  std::uint64_t seed = 1;
  std::size_t cases = 100;
  std::size_t samples = 1000000;
  std::size_t k_min = 2;
  std::size_t k_max = 5;
  std::size_t count_max = 10;  // S, F uniform in 1..count_max
  std::size_t workers = 1;
};

struct InfoRatioSuiteResult {
  std::vector<InfoRatioReport> reports;
  std::size_t failures = 0;
  std::size_t inconclusive = 0;

  double inconclusive_rate() const {
    return reports.empty() ? 0.0
                           : static_cast<double>(inconclusive) / static_cast<double>(reports.size());
  }
  bool pass() const { return failures == 0 && inconclusive_rate() <= 0.05; }
};

inline InfoRatioSuiteResult run_info_ratio_suite(const InfoRatioSuiteOptions& opt) {
  InfoRatioSuiteResult res;
  for (std::size_t c = 0; c < opt.cases; ++c) {
    Rng gen = make_stream(opt.seed, c, "info-ratio");
    const std::size_t k = opt.k_min + uniform_index(opt.k_max - opt.k_min + 1, gen);
    std::vector<double> s(k), f(k);
    for (std::size_t i = 0; i < k; ++i) {
      s[i] = static_cast<double>(1 + uniform_index(opt.count_max, gen));
      f[i] = static_cast<double>(1 + uniform_index(opt.count_max, gen));
    }
    const BetaPosterior post(std::move(s), std::move(f));
    const FeedbackGraph g = random_test_graph(k, k, gen);
    InfoRatioReport r = check_info_ratio(post, g, opt.samples, gen, opt.workers);
    if (!r.pass) ++res.failures;
    if (r.inconclusive) ++res.inconclusive;
    res.reports.push_back(std::move(r));
  }
  return res;
}

/// One-sided comparison of an empirical mean regret against a bound.
struct BoundCheck {
  std::string name;
  double empirical_mean = 0.0;
  double standard_error = 0.0;
  double bound = 0.0;
  bool pass = false;

  VerificationRecord record() const {
    return {name, digest_hex(name), empirical_mean, bound, standard_error, pass, false};
  }
};

inline BoundCheck compare_to_bound(std::string name, const AggregateCurve& curve, double bound) {
  BoundCheck c;
  c.name = std::move(name);
  c.empirical_mean = curve.mean.back();
  c.standard_error = curve.stddev.back() / std::sqrt(static_cast<double>(curve.trials));
  c.bound = bound;
  c.pass = c.empirical_mean <= bound + 3.0 * c.standard_error;
  return c;
}

/// Entropy of the prior optimal-action distribution, H(alpha_1).
inline double prior_entropy(std::size_t k, BetaPrior prior = {}) {
  return entropy(optimal_action_dist(BetaPosterior(k, prior)));
}

struct RegretBoundOptions {
  std::uint64_t seed = 1;
  std::size_t k = 5;
  std::size_t horizon = 1000;
  std::size_t trials = 500;
  std::size_t workers = 1;
};

/// TS-N against the undirected (beta0) and directed (mas) regret bounds on the
/// fixed and Erdos-Renyi settings, and TS-U with eps = 1/sqrt(T) against its
/// bound on the total order. Metric sums are the realised per-trial sums,
/// averaged over trials.
inline std::vector<BoundCheck> run_regret_bound_suite(const RegretBoundOptions& opt) {
  const double h0 = prior_entropy(opt.k);
  std::vector<BoundCheck> out;

  auto base = [&](GraphSpec graph, PolicySpec policy) {
    ExperimentConfig cfg;
    cfg.k = opt.k;
    cfg.horizon = opt.horizon;
    cfg.trials = opt.trials;
    cfg.seed = opt.seed;
    cfg.workers = opt.workers;
    cfg.graph = std::move(graph);
    cfg.policy = policy;
    cfg.track_metrics = true;
    return cfg;
  };
  PolicySpec tsn;
  tsn.kind = PolicyKind::ts_n;

  std::vector<GraphSpec> undirected;
  if (opt.k >= 2) {
    const std::vector<std::size_t> halves{opt.k - opt.k / 2, opt.k / 2};
    undirected.push_back({"cliques", make_graph(GraphKind::cliques, opt.k, false, halves)});
  }
  undirected.push_back({"er:0,0.2,undir", ErdosRenyiSpec{opt.k, 0.0, 0.2, false}});
  for (auto& g : undirected) {
    const auto curve = run_experiment(base(g, tsn));
    out.push_back(compare_to_bound("ts-n/" + g.label + "/beta0", curve,
                                   regret_bound_value(curve.mean_beta0_sum, h0)));
  }

  const std::vector<GraphSpec> directed{
      {"total-order", make_graph(GraphKind::total_order, opt.k)},
      {"er:0,0.2,dir", ErdosRenyiSpec{opt.k, 0.0, 0.2, true}}};
  for (const auto& g : directed) {
    const auto curve = run_experiment(base(g, tsn));
    out.push_back(compare_to_bound("ts-n/" + g.label + "/mas", curve,
                                   regret_bound_value(curve.mean_mas_sum, h0)));
  }

  PolicySpec tsu;
  tsu.kind = PolicyKind::ts_u;
  tsu.schedule = ExplorationSchedule::inv_sqrt_T(opt.horizon);
  const double eps = tsu.schedule.epsilon(1);
  const FeedbackGraph order = make_graph(GraphKind::total_order, opt.k);
  const auto curve = run_experiment(base({"total-order", order}, tsu));
  out.push_back(compare_to_bound("ts-u/total-order/beta0", curve,
                                 tsu_bound_value(opt.horizon, opt.k, eps,
                                                 independence_number(order), h0)));
  return out;
}

}  // namespace latentbandit
