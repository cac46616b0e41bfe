// Compares TS-N, TS-U and UCB-N on two disjoint cliques and prints the mean
// cumulative regret every 100 rounds.

#include <cstdio>

#include "latentbandit.hpp"

namespace lb = latentbandit;

int main() {
  lb::ExperimentConfig cfg;
  cfg.k = 5;
  cfg.horizon = 1000;
  cfg.trials = 200;
  cfg.seed = 7;
  const std::size_t sizes[] = {3, 2};
  cfg.graph = {"cliques:3,2", lb::make_graph(lb::GraphKind::cliques, 5, false, sizes)};

  const lb::PolicyKind kinds[] = {lb::PolicyKind::ts_n, lb::PolicyKind::ts_u, lb::PolicyKind::ucb_n};
  std::printf("%8s", "t");
  for (auto kind : kinds) std::printf("%10s", std::string(lb::policy_name(kind)).c_str());
  std::printf("\n");

  std::vector<lb::AggregateCurve> curves;
  for (auto kind : kinds) {
    cfg.policy.kind = kind;
    cfg.policy.schedule = lb::default_schedule(kind);
    curves.push_back(lb::run_experiment(cfg));
  }
  for (std::size_t t = 99; t < cfg.horizon; t += 100) {
    std::printf("%8zu", t + 1);
    for (const auto& c : curves) std::printf("%10.2f", c.mean[t]);
    std::printf("\n");
  }
  const double bound = lb::regret_bound_value(2.0 * cfg.horizon, lb::prior_entropy(cfg.k));
  std::printf("TS-N regret bound with beta0 = 2: %.2f\n", bound);
}
