#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "latentbandit/errors.hpp"
#include "latentbandit/graph.hpp"
#include "latentbandit/random.hpp"

namespace latentbandit {

struct BetaPrior {
  double a = 1.0;
  double b = 1.0;

  void validate() const {
    if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b))
      throw InvalidConfig("Beta prior parameters must be positive and finite");
  }
};

/// Bernoulli arms with fixed means. The best arm is the lowest-index argmax.
class BanditEnvironment {
 public:
  explicit BanditEnvironment(std::vector<double> means, BetaPrior prior = {})
      : means_(std::move(means)), prior_(prior) {
    if (means_.empty()) throw InvalidConfig("environment needs at least one arm");
    for (double m : means_)
      if (!(m >= 0.0 && m <= 1.0)) throw InvalidConfig("arm means must lie in [0, 1]");
    for (std::size_t i = 1; i < means_.size(); ++i)
      if (means_[i] > means_[best_]) best_ = i;
  }

  std::size_t k() const noexcept { return means_.size(); }
  std::span<const double> means() const noexcept { return means_; }
  double mean(std::size_t i) const { return means_.at(i); }
  std::size_t best_arm() const noexcept { return best_; }
  double best_mean() const noexcept { return means_[best_]; }
  const BetaPrior& prior() const noexcept { return prior_; }

  /// Expected one-round regret of playing `arm`.
  double gap(std::size_t arm) const { return best_mean() - means_.at(arm); }

  /// Full reward vector Y_t; the policy only ever sees the revealed subset.
  template <class Gen>
  void realize(Gen& gen, std::vector<std::uint8_t>& out) const {
    out.resize(means_.size());
    for (std::size_t i = 0; i < means_.size(); ++i) out[i] = uniform01(gen) < means_[i] ? 1 : 0;
  }

 private:
  std::vector<double> means_;
  BetaPrior prior_;
  std::size_t best_ = 0;
};

template <class Gen>
BanditEnvironment draw_environment(std::size_t k, BetaPrior prior, Gen& gen) {
  prior.validate();
  if (k == 0) throw InvalidConfig("arm count must be at least 1");
  std::vector<double> means(k);
  for (double& m : means) m = sample_beta(prior.a, prior.b, gen);
  return BanditEnvironment(std::move(means), prior);
}

/// Per-arm Beta(S_i, F_i) posterior. Counts start at the prior and only grow.
class BetaPosterior {
 public:
  explicit BetaPosterior(std::size_t k, BetaPrior prior = {})
      : prior_(prior), s_(k, prior.a), f_(k, prior.b) {
    prior.validate();
    if (k == 0) throw InvalidConfig("posterior needs at least one arm");
  }

  /// Explicit counts, e.g. for analysis of a given posterior state.
  BetaPosterior(std::vector<double> s, std::vector<double> f, BetaPrior prior = {})
      : prior_(prior), s_(std::move(s)), f_(std::move(f)) {
    if (s_.empty() || s_.size() != f_.size())
      throw InvalidConfig("posterior count vectors must be non-empty and equal length");
    for (std::size_t i = 0; i < s_.size(); ++i)
      if (!(s_[i] > 0.0) || !(f_[i] > 0.0))
        throw InvalidConfig("posterior parameters must be positive");
  }

  std::size_t k() const noexcept { return s_.size(); }
  std::span<const double> successes() const noexcept { return s_; }
  std::span<const double> failures() const noexcept { return f_; }
  double s(std::size_t i) const { return s_.at(i); }
  double f(std::size_t i) const { return f_.at(i); }
  const BetaPrior& prior() const noexcept { return prior_; }

  double observations(std::size_t i) const { return s_.at(i) + f_.at(i) - prior_.a - prior_.b; }
  double posterior_mean(std::size_t i) const { return s_.at(i) / (s_.at(i) + f_.at(i)); }

  void record(std::size_t arm, bool reward) {
    if (reward)
      s_.at(arm) += 1.0;
    else
      f_.at(arm) += 1.0;
  }

  template <class Gen>
  void sample(Gen& gen, std::vector<double>& theta) const {
    theta.resize(s_.size());
    for (std::size_t i = 0; i < s_.size(); ++i) theta[i] = sample_beta(s_[i], f_[i], gen);
  }

  friend bool operator==(const BetaPosterior&, const BetaPosterior&) = default;

 private:
  BetaPrior prior_;
  std::vector<double> s_;
  std::vector<double> f_;
};

/// Records Y_{t,a} for every a with chosen -> a in the round's graph.
inline BetaPosterior update_posterior(BetaPosterior post, const FeedbackGraph& g,
                                      std::size_t chosen, std::span<const std::uint8_t> rewards) {
  if (g.k() != post.k() || rewards.size() != post.k() || chosen >= post.k())
    throw InvalidConfig("posterior update: arm count mismatch");
  for (std::size_t a = 0; a < g.k(); ++a)
    if (g.has_arc(chosen, a)) post.record(a, rewards[a] != 0);
  return post;
}

/// A point of the probability simplex over arms (pi_t or alpha_t).
class PolicyDistribution {
 public:
  explicit PolicyDistribution(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.empty()) throw InvalidDistribution("empty distribution");
    validate_simplex(probs_, probs_.size());
  }

  static PolicyDistribution uniform(std::size_t k) {
    return PolicyDistribution(std::vector<double>(k, 1.0 / static_cast<double>(k)));
  }

  /// (1 - eps) * this + eps / K
  PolicyDistribution mix_uniform(double eps) const {
    std::vector<double> out(probs_.size());
    const double u = eps / static_cast<double>(probs_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = (1.0 - eps) * probs_[i] + u;
    return PolicyDistribution(std::move(out));
  }

  std::size_t k() const noexcept { return probs_.size(); }
  std::span<const double> probs() const noexcept { return probs_; }
  double operator[](std::size_t i) const { return probs_.at(i); }

 private:
  std::vector<double> probs_;
};

/// Exploration rate eps_t for TS-U.
class ExplorationSchedule {
 public:
  enum class Kind { none, fixed, inv_sqrt_T, inv_t };

  static ExplorationSchedule none() { return {Kind::none, 0.0}; }
  static ExplorationSchedule fixed(double eps) {
    if (!(eps >= 0.0 && eps <= 1.0)) throw InvalidConfig("fixed exploration rate must lie in [0, 1]");
    return {Kind::fixed, eps};
  }
  static ExplorationSchedule inv_sqrt_T(std::size_t horizon) {
    if (horizon == 0) throw InvalidConfig("inv-sqrt-T schedule needs a positive horizon");
    return {Kind::inv_sqrt_T, 1.0 / std::sqrt(static_cast<double>(horizon))};
  }
  static ExplorationSchedule inv_t() { return {Kind::inv_t, 0.0}; }

  Kind kind() const noexcept { return kind_; }

  /// Rate for round t (1-based).
  double epsilon(std::size_t t) const noexcept {
    switch (kind_) {
      case Kind::none:
        return 0.0;
      case Kind::fixed:
      case Kind::inv_sqrt_T:
        return value_;
      case Kind::inv_t:
        return t == 0 ? 1.0 : 1.0 / static_cast<double>(t);
    }
    return 0.0;
  }

 private:
  ExplorationSchedule(Kind kind, double value) : kind_(kind), value_(value) {}

  Kind kind_;
  double value_;
};

/// Argmax with uniform tie-breaking. Consumes randomness only on ties.
template <class Gen>
std::size_t argmax_random_tie(std::span<const double> values, Gen& gen) {
  std::size_t best = 0;
  std::size_t ties = 1;
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (values[i] > values[best]) {
      best = i;
      ties = 1;
    } else if (values[i] == values[best]) {
      ++ties;
    }
  }
  if (ties == 1) return best;
  std::size_t pick = uniform_index(ties, gen);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == values[best]) {
      if (pick == 0) return i;
      --pick;
    }
  }
  return best;
}

/// Thompson sampling: theta_i ~ Beta(S_i, F_i), play argmax theta.
template <class Gen>
std::size_t ts_n_select(const BetaPosterior& post, Gen& gen) {
  thread_local std::vector<double> theta;
  post.sample(gen, theta);
  return argmax_random_tie(std::span<const double>(theta), gen);
}

/// With probability eps_t a uniform arm, otherwise a Thompson sample.
template <class Gen>
std::size_t ts_u_select(const BetaPosterior& post, double eps_t, Gen& gen) {
  if (!(eps_t >= 0.0 && eps_t <= 1.0)) throw InvalidConfig("exploration rate must lie in [0, 1]");
  if (uniform01(gen) < eps_t) return uniform_index(post.k(), gen);
  return ts_n_select(post, gen);
}

inline constexpr double kDefaultUcbExploration = 2.0;

/// UCB over all observations (played or side-observed). Unobserved arms are
/// played first, lowest index first.
template <class Gen>
std::size_t ucb_n_select(std::span<const double> counts, std::span<const double> sums,
                         std::size_t t, Gen& gen, double exploration = kDefaultUcbExploration) {
  if (t == 0) throw InvalidConfig("UCB round index must be at least 1");
  if (counts.size() != sums.size() || counts.empty())
    throw InvalidConfig("UCB count and sum vectors must be non-empty and equal length");
  for (std::size_t i = 0; i < counts.size(); ++i)
    if (counts[i] <= 0.0) return i;
  thread_local std::vector<double> index;
  index.resize(counts.size());
  const double log_t = std::log(static_cast<double>(t));
  for (std::size_t i = 0; i < counts.size(); ++i)
    index[i] = sums[i] / counts[i] + std::sqrt(exploration * log_t / counts[i]);
  return argmax_random_tie(std::span<const double>(index), gen);
}

}  // namespace latentbandit
