#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "latentbandit/bandit.hpp"
#include "latentbandit/graph.hpp"
#include "latentbandit/graph_metrics.hpp"
#include "latentbandit/policies.hpp"
#include "latentbandit/random.hpp"

namespace latentbandit {

/// A graph process plus the label it is reported under.
struct GraphSpec {
  std::string label;
  GraphSequence::Kind kind;

  std::size_t k() const {
    if (const auto* g = std::get_if<FeedbackGraph>(&kind)) return g->k();
    return std::get<ErdosRenyiSpec>(kind).k;
  }
  bool directed() const {
    if (const auto* g = std::get_if<FeedbackGraph>(&kind)) return g->directed();
    return std::get<ErdosRenyiSpec>(kind).directed;
  }
};

struct ExperimentConfig {
  std::size_t k = 5;
  std::size_t horizon = 1000;
  std::size_t trials = 1000;
  PolicySpec policy{};
  GraphSpec graph{"empty", FeedbackGraph(5, false)};
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string out;
  // Accumulate sum_t beta0(G_t) and sum_t mas(G_t) along each trial.
  bool track_metrics = false;
  // Share one graph stream across policies instead of one per policy.
  bool paired_graphs = false;

  void validate() const {
    if (k == 0) throw InvalidConfig("arm count must be at least 1");
    if (horizon == 0) throw InvalidConfig("horizon must be at least 1");
    if (trials == 0) throw InvalidConfig("trial count must be at least 1");
    if (graph.k() != k)
      throw InvalidConfig("graph '" + graph.label + "' has " + std::to_string(graph.k()) +
                          " arms but the experiment has " + std::to_string(k));
    if (const auto* er = std::get_if<ErdosRenyiSpec>(&graph.kind)) er->validate();
    policy.prior.validate();
    // Surfaces policy/schedule mismatches before any trial runs.
    (void)make_policy(policy, k);
  }
};

struct RegretTrace {
  std::size_t trial_id = 0;
  std::vector<double> cum_regret;
  std::size_t revealed = 0;  // total (arm, reward) pairs shown to the policy
  double beta0_sum = 0.0;
  double mas_sum = 0.0;
};

struct AggregateCurve {
  std::vector<double> mean;
  std::vector<double> stddev;  // sample standard deviation, 0 for one trial
  std::size_t trials = 0;
  double mean_beta0_sum = 0.0;
  double mean_mas_sum = 0.0;

  friend bool operator==(const AggregateCurve&, const AggregateCurve&) = default;
};

class TrialError : public std::runtime_error {
 public:
  TrialError(std::size_t trial_id, const std::string& what)
      : std::runtime_error("trial " + std::to_string(trial_id) + ": " + what), trial_id_(trial_id) {}
  std::size_t trial_id() const noexcept { return trial_id_; }

 private:
  std::size_t trial_id_;
};

struct TrialStreams {
  Rng graph;
  Rng policy;
  Rng reward;
};

/// One interaction run: each round the graph advances, the policy picks an
/// arm from its own state, the full reward vector is realised, and only the
/// chosen arm's out-neighbourhood is revealed. Pseudo-regret is accumulated.
template <class Policy>
RegretTrace play_trial(const BanditEnvironment& env, GraphSequence& graphs, Policy& policy,
                       std::size_t horizon, TrialStreams& streams, bool track_metrics = false) {
  if (graphs.k() != env.k()) throw InvalidConfig("graph and environment arm counts differ");
  RegretTrace trace;
  trace.cum_regret.resize(horizon);
  std::vector<std::uint8_t> rewards;
  std::optional<GraphMetrics> fixed_metrics;
  double total = 0.0;
  for (std::size_t t = 1; t <= horizon; ++t) {
    const FeedbackGraph& g = graphs.next(streams.graph);
    const std::size_t arm = policy.select(t, streams.policy);
    if (arm >= env.k()) throw std::logic_error("policy returned an out-of-range arm");
    env.realize(streams.reward, rewards);
    for (std::size_t a = 0; a < g.k(); ++a) {
      if (g.has_arc(arm, a)) {
        policy.observe(a, rewards[a] != 0);
        ++trace.revealed;
      }
    }
    total += env.gap(arm);
    trace.cum_regret[t - 1] = total;
    if (track_metrics) {
      if (graphs.time_invariant()) {
        if (!fixed_metrics) fixed_metrics = GraphMetrics{independence_number(g), mas_number(g), 0};
        trace.beta0_sum += static_cast<double>(fixed_metrics->beta0);
        trace.mas_sum += static_cast<double>(fixed_metrics->mas);
      } else {
        trace.beta0_sum += static_cast<double>(independence_number(g));
        trace.mas_sum += static_cast<double>(mas_number(g));
      }
    }
  }
  return trace;
}

inline TrialStreams trial_streams(const ExperimentConfig& cfg, std::size_t trial_id) {
  const std::string policy_label(policy_name(cfg.policy.kind));
  return TrialStreams{
      make_stream(cfg.seed, trial_id, cfg.paired_graphs ? "graph" : "graph/" + policy_label),
      make_stream(cfg.seed, trial_id, "policy/" + policy_label),
      make_stream(cfg.seed, trial_id, "reward")};
}

/// Deterministic in (cfg, trial_id). The environment stream does not depend
/// on the policy, so every policy faces the same arm means in a given trial.
inline RegretTrace run_trial(const ExperimentConfig& cfg, std::size_t trial_id) {
  cfg.validate();
  Rng env_rng = make_stream(cfg.seed, trial_id, "env");
  const BanditEnvironment env = draw_environment(cfg.k, cfg.policy.prior, env_rng);
  GraphSequence graphs(cfg.graph.kind, cfg.horizon);
  TrialStreams streams = trial_streams(cfg, trial_id);
  AnyPolicy policy = make_policy(cfg.policy, cfg.k);
  RegretTrace trace = std::visit(
      [&](auto& p) { return play_trial(env, graphs, p, cfg.horizon, streams, cfg.track_metrics); },
      policy);
  trace.trial_id = trial_id;
  return trace;
}

/// Runs all trials on `cfg.workers` threads. Results are stored by trial id,
/// so the output does not depend on the worker count.
inline std::vector<RegretTrace> run_trials(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RegretTrace> traces(cfg.trials);
  const std::size_t workers = std::max<std::size_t>(1, std::min(cfg.workers, cfg.trials));
  std::atomic<std::size_t> next{0};
  std::mutex error_mutex;
  std::optional<std::pair<std::size_t, std::string>> first_error;

  auto work = [&] {
    for (;;) {
      const std::size_t id = next.fetch_add(1);
      if (id >= cfg.trials) return;
      try {
        traces[id] = run_trial(cfg, id);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mutex);
        if (!first_error || id < first_error->first) first_error.emplace(id, e.what());
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (first_error) throw TrialError(first_error->first, first_error->second);
  return traces;
}

/// Mean and sample standard deviation per round, folded in trial order.
inline AggregateCurve aggregate(const std::vector<RegretTrace>& traces) {
  AggregateCurve curve;
  if (traces.empty()) return curve;
  const std::size_t horizon = traces.front().cum_regret.size();
  const double n = static_cast<double>(traces.size());
  curve.trials = traces.size();
  curve.mean.assign(horizon, 0.0);
  curve.stddev.assign(horizon, 0.0);
  for (const auto& tr : traces) {
    if (tr.cum_regret.size() != horizon) throw InvalidConfig("traces have different horizons");
    for (std::size_t t = 0; t < horizon; ++t) curve.mean[t] += tr.cum_regret[t];
    curve.mean_beta0_sum += tr.beta0_sum;
    curve.mean_mas_sum += tr.mas_sum;
  }
  for (double& m : curve.mean) m /= n;
  curve.mean_beta0_sum /= n;
  curve.mean_mas_sum /= n;
  if (traces.size() > 1) {
    for (const auto& tr : traces)
      for (std::size_t t = 0; t < horizon; ++t) {
        const double d = tr.cum_regret[t] - curve.mean[t];
        curve.stddev[t] += d * d;
      }
    for (double& s : curve.stddev) s = std::sqrt(s / (n - 1.0));
  }
  return curve;
}

inline AggregateCurve run_experiment(const ExperimentConfig& cfg) {
  return aggregate(run_trials(cfg));
}

}  // namespace latentbandit
