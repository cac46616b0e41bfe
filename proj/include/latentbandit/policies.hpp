#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "latentbandit/bandit.hpp"

namespace latentbandit {

// A policy sees only (arm, reward) pairs revealed by the latent graph, never
// the graph itself. Interface shared by all policies:
//   std::size_t select(std::size_t t, Rng&);     t is 1-based
//   void observe(std::size_t arm, bool reward);

class TsnPolicy {
 public:
  TsnPolicy(std::size_t k, BetaPrior prior = {}) : post_(k, prior) {}

  template <class Gen>
  std::size_t select(std::size_t /*t*/, Gen& gen) {
    return ts_n_select(post_, gen);
  }
  void observe(std::size_t arm, bool reward) { post_.record(arm, reward); }
  const BetaPosterior& posterior() const noexcept { return post_; }

 private:
  BetaPosterior post_;
};

class TsuPolicy {
 public:
  TsuPolicy(std::size_t k, ExplorationSchedule schedule, BetaPrior prior = {})
      : post_(k, prior), schedule_(schedule) {}

  template <class Gen>
  std::size_t select(std::size_t t, Gen& gen) {
    return ts_u_select(post_, schedule_.epsilon(t), gen);
  }
  void observe(std::size_t arm, bool reward) { post_.record(arm, reward); }
  const BetaPosterior& posterior() const noexcept { return post_; }
  const ExplorationSchedule& schedule() const noexcept { return schedule_; }

 private:
  BetaPosterior post_;
  ExplorationSchedule schedule_;
};

class UcbnPolicy {
 public:
  explicit UcbnPolicy(std::size_t k, double exploration = kDefaultUcbExploration)
      : counts_(k, 0.0), sums_(k, 0.0), exploration_(exploration) {}

  template <class Gen>
  std::size_t select(std::size_t t, Gen& gen) {
    return ucb_n_select(counts_, sums_, t, gen, exploration_);
  }
  void observe(std::size_t arm, bool reward) {
    counts_.at(arm) += 1.0;
    sums_[arm] += reward ? 1.0 : 0.0;
  }

 private:
  std::vector<double> counts_;
  std::vector<double> sums_;
  double exploration_;
};

class UniformPolicy {
 public:
  explicit UniformPolicy(std::size_t k) : k_(k) {}

  template <class Gen>
  std::size_t select(std::size_t /*t*/, Gen& gen) {
    return uniform_index(k_, gen);
  }
  void observe(std::size_t, bool) {}

 private:
  std::size_t k_;
};

enum class PolicyKind { ts_n, ts_u, ucb_n, uniform };

inline std::string_view policy_name(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ts_n:
      return "ts-n";
    case PolicyKind::ts_u:
      return "ts-u";
    case PolicyKind::ucb_n:
      return "ucb-n";
    case PolicyKind::uniform:
      return "uniform";
  }
  return "?";
}

inline PolicyKind parse_policy(std::string_view name) {
  if (name == "ts-n") return PolicyKind::ts_n;
  if (name == "ts-u") return PolicyKind::ts_u;
  if (name == "ucb-n") return PolicyKind::ucb_n;
  if (name == "uniform") return PolicyKind::uniform;
  throw InvalidConfig("unknown policy '" + std::string(name) + "'");
}

struct PolicySpec {
  PolicyKind kind = PolicyKind::ts_n;
  ExplorationSchedule schedule = ExplorationSchedule::none();
  double ucb_exploration = kDefaultUcbExploration;
  BetaPrior prior{};
};

using AnyPolicy = std::variant<TsnPolicy, TsuPolicy, UcbnPolicy, UniformPolicy>;

inline AnyPolicy make_policy(const PolicySpec& spec, std::size_t k) {
  if (spec.kind != PolicyKind::ts_u && spec.schedule.kind() != ExplorationSchedule::Kind::none)
    throw InvalidConfig("an exploration schedule only applies to ts-u");
  switch (spec.kind) {
    case PolicyKind::ts_n:
      return TsnPolicy(k, spec.prior);
    case PolicyKind::ts_u:
      return TsuPolicy(k, spec.schedule, spec.prior);
    case PolicyKind::ucb_n:
      return UcbnPolicy(k, spec.ucb_exploration);
    case PolicyKind::uniform:
      return UniformPolicy(k);
  }
  throw InvalidConfig("unknown policy kind");
}

}  // namespace latentbandit
