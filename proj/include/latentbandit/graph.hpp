#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "latentbandit/errors.hpp"
#include "latentbandit/random.hpp"

namespace latentbandit {

/// Latent observation system for one round. Arc i -> j means that playing
/// arm i reveals the reward of arm j. Self-loops are always present.
/// Arms are 0-based here; external formats use 1-based indices.
class FeedbackGraph {
 public:
  FeedbackGraph(std::size_t k, bool directed) : k_(k), directed_(directed), adj_(k * k, 0) {
    if (k == 0) throw InvalidConfig("feedback graph needs at least one arm");
    for (std::size_t i = 0; i < k; ++i) adj_[i * k + i] = 1;
  }

  std::size_t k() const noexcept { return k_; }
  bool directed() const noexcept { return directed_; }

  bool has_arc(std::size_t from, std::size_t to) const noexcept { return adj_[from * k_ + to] != 0; }

  /// Adds from -> to; on an undirected graph the reverse arc is added too.
  void add_arc(std::size_t from, std::size_t to) {
    if (from >= k_ || to >= k_) throw InvalidConfig("arc endpoint out of range");
    adj_[from * k_ + to] = 1;
    if (!directed_) adj_[to * k_ + from] = 1;
  }

  std::vector<std::size_t> out_neighbors(std::size_t i) const {
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < k_; ++j)
      if (has_arc(i, j)) out.push_back(j);
    return out;
  }

  std::size_t out_degree(std::size_t i) const noexcept {
    std::size_t n = 0;
    for (std::size_t j = 0; j < k_; ++j) n += adj_[i * k_ + j];
    return n;
  }

  /// Number of arcs i -> j with i != j.
  std::size_t off_diagonal_arcs() const noexcept {
    std::size_t n = 0;
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = 0; j < k_; ++j) n += (i != j) && has_arc(i, j);
    return n;
  }

  bool is_symmetric() const noexcept {
    for (std::size_t i = 0; i < k_; ++i)
      for (std::size_t j = i + 1; j < k_; ++j)
        if (has_arc(i, j) != has_arc(j, i)) return false;
    return true;
  }

  friend bool operator==(const FeedbackGraph&, const FeedbackGraph&) = default;

 private:
  std::size_t k_;
  bool directed_;
  std::vector<std::uint8_t> adj_;
};

enum class GraphKind { empty, complete, cliques, total_order };

/// Builds one of the fixed graph families. `cliques` is always undirected and
/// `total_order` (arc i -> j iff i <= j) is always directed; `directed` only
/// labels the empty and complete graphs.
inline FeedbackGraph make_graph(GraphKind kind, std::size_t k, bool directed = false,
                                std::span<const std::size_t> partition = {}) {
  if (k == 0) throw InvalidConfig("arm count must be at least 1");
  switch (kind) {
    case GraphKind::empty:
      return FeedbackGraph(k, directed);
    case GraphKind::complete: {
      FeedbackGraph g(k, directed);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = 0; j < k; ++j) g.add_arc(i, j);
      return g;
    }
    case GraphKind::cliques: {
      std::size_t total = 0;
      for (std::size_t s : partition) {
        if (s == 0) throw InvalidConfig("clique sizes must be positive");
        total += s;
      }
      if (total != k)
        throw InvalidConfig("clique sizes sum to " + std::to_string(total) + ", expected " +
                            std::to_string(k));
      FeedbackGraph g(k, false);
      std::size_t start = 0;
      for (std::size_t s : partition) {
        for (std::size_t i = start; i < start + s; ++i)
          for (std::size_t j = i + 1; j < start + s; ++j) g.add_arc(i, j);
        start += s;
      }
      return g;
    }
    case GraphKind::total_order: {
      FeedbackGraph g(k, true);
      for (std::size_t i = 0; i < k; ++i)
        for (std::size_t j = i; j < k; ++j) g.add_arc(i, j);
      return g;
    }
  }
  throw InvalidConfig("unknown graph kind");
}

struct ErdosRenyiSpec {
  std::size_t k = 1;
  double p_low = 0.0;
  double p_high = 0.0;
  bool directed = false;

  void validate() const {
    if (k == 0) throw InvalidConfig("arm count must be at least 1");
    if (!(0.0 <= p_low && p_low <= p_high && p_high <= 1.0))
      throw InvalidConfig("Erdos-Renyi range must satisfy 0 <= p_low <= p_high <= 1");
  }
};

/// Draws p uniformly from [p_low, p_high], then each off-diagonal ordered pair
/// (directed) or unordered pair (undirected) independently with probability p.
template <class Gen>
FeedbackGraph sample_er_graph(const ErdosRenyiSpec& spec, Gen& gen) {
  spec.validate();
  const double p = spec.p_low == spec.p_high
                       ? spec.p_low
                       : std::uniform_real_distribution<double>(spec.p_low, spec.p_high)(gen);
  FeedbackGraph g(spec.k, spec.directed);
  for (std::size_t i = 0; i < spec.k; ++i) {
    for (std::size_t j = spec.directed ? 0 : i + 1; j < spec.k; ++j) {
      if (i == j) continue;
      if (uniform01(gen) < p) g.add_arc(i, j);
    }
  }
  return g;
}

/// Per-round source of feedback graphs over a fixed horizon.
class GraphSequence {
 public:
  using Kind = std::variant<FeedbackGraph, ErdosRenyiSpec>;

  GraphSequence(Kind kind, std::size_t horizon) : kind_(std::move(kind)), horizon_(horizon) {
    if (const auto* er = std::get_if<ErdosRenyiSpec>(&kind_)) {
      er->validate();
      current_.emplace(er->k, er->directed);
    }
  }

  std::size_t k() const {
    if (const auto* g = std::get_if<FeedbackGraph>(&kind_)) return g->k();
    return std::get<ErdosRenyiSpec>(kind_).k;
  }
  bool directed() const {
    if (const auto* g = std::get_if<FeedbackGraph>(&kind_)) return g->directed();
    return std::get<ErdosRenyiSpec>(kind_).directed;
  }
  bool time_invariant() const noexcept { return std::holds_alternative<FeedbackGraph>(kind_); }
  std::size_t horizon() const noexcept { return horizon_; }
  std::size_t emitted() const noexcept { return emitted_; }
  const Kind& kind() const noexcept { return kind_; }

  /// Graph for the next round. The reference stays valid until the next call.
  template <class Gen>
  const FeedbackGraph& next(Gen& gen) {
    if (emitted_ >= horizon_) throw std::out_of_range("graph sequence exhausted");
    ++emitted_;
    if (const auto* g = std::get_if<FeedbackGraph>(&kind_)) return *g;
    current_ = sample_er_graph(std::get<ErdosRenyiSpec>(kind_), gen);
    return *current_;
  }

 private:
  Kind kind_;
  std::size_t horizon_;
  std::size_t emitted_ = 0;
  std::optional<FeedbackGraph> current_;
};

inline constexpr double kSimplexTolerance = 1e-9;

inline void validate_simplex(std::span<const double> pi, std::size_t k) {
  if (pi.size() != k)
    throw InvalidDistribution("distribution has " + std::to_string(pi.size()) +
                              " entries, expected " + std::to_string(k));
  double sum = 0.0;
  for (double p : pi) {
    if (!(p >= -kSimplexTolerance) || !std::isfinite(p))
      throw InvalidDistribution("distribution has a negative or non-finite entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSimplexTolerance)
    throw InvalidDistribution("distribution sums to " + std::to_string(sum));
}

/// Q(pi, G) = sum_i pi(i) / (sum over in-neighbours j -> i of pi(j)).
/// Terms with pi(i) == 0 contribute nothing.
inline double q_quantity(const FeedbackGraph& g, std::span<const double> pi) {
  validate_simplex(pi, g.k());
  const std::size_t k = g.k();
  double q = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (pi[i] <= 0.0) continue;
    double in_mass = 0.0;
    for (std::size_t j = 0; j < k; ++j)
      if (g.has_arc(j, i)) in_mass += std::max(pi[j], 0.0);
    q += pi[i] / in_mass;
  }
  return q;
}

}  // namespace latentbandit
