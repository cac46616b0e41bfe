#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include "latentbandit/graph.hpp"

namespace latentbandit {

inline constexpr std::size_t kExactSearchLimit = 20;

struct GraphMetrics {
  std::size_t beta0 = 0;  // independence number, orientation ignored
  std::size_t mas = 0;    // maximum acyclic induced subgraph size
  std::size_t chi = 0;    // clique cover number, cliques need mutual arcs

  friend bool operator==(const GraphMetrics&, const GraphMetrics&) = default;
};

namespace detail {

using Mask = std::uint32_t;

inline void check_limit(const FeedbackGraph& g, std::size_t limit) {
  // Subset tables beyond this size do not fit comfortably in memory.
  if (limit > 24) limit = 24;
  if (g.k() > limit)
    throw SizeLimitError("exact search limited to " + std::to_string(limit) + " arms, graph has " +
                         std::to_string(g.k()));
}

inline Mask bit(std::size_t i) { return Mask{1} << i; }

// Off-diagonal neighbour masks.
inline std::vector<Mask> any_arc_masks(const FeedbackGraph& g) {
  std::vector<Mask> nb(g.k(), 0);
  for (std::size_t i = 0; i < g.k(); ++i)
    for (std::size_t j = 0; j < g.k(); ++j)
      if (i != j && (g.has_arc(i, j) || g.has_arc(j, i))) nb[i] |= bit(j);
  return nb;
}

inline std::vector<Mask> mutual_arc_masks(const FeedbackGraph& g) {
  std::vector<Mask> nb(g.k(), 0);
  for (std::size_t i = 0; i < g.k(); ++i)
    for (std::size_t j = 0; j < g.k(); ++j)
      if (i != j && g.has_arc(i, j) && g.has_arc(j, i)) nb[i] |= bit(j);
  return nb;
}

// Branch and bound maximum independent set over candidate set `cand`.
class MaxIndependentSet {
 public:
  explicit MaxIndependentSet(const std::vector<Mask>& nb) : nb_(nb) {}

  Mask solve(Mask all) {
    best_ = 0;
    best_set_ = 0;
    search(all, 0, 0);
    return best_set_;
  }

 private:
  void search(Mask cand, Mask chosen, int size) {
    if (cand == 0) {
      if (size > best_) {
        best_ = size;
        best_set_ = chosen;
      }
      return;
    }
    if (size + std::popcount(cand) <= best_) return;
    // Vertices with no neighbour among candidates can always be taken.
    Mask free = 0;
    for (Mask c = cand; c; c &= c - 1) {
      const int v = std::countr_zero(c);
      if ((nb_[v] & cand) == 0) free |= bit(v);
    }
    if (free) {
      search(cand & ~free, chosen | free, size + std::popcount(free));
      return;
    }
    int pivot = -1;
    int pivot_deg = -1;
    for (Mask c = cand; c; c &= c - 1) {
      const int v = std::countr_zero(c);
      const int d = std::popcount(nb_[v] & cand);
      if (d > pivot_deg) {
        pivot_deg = d;
        pivot = v;
      }
    }
    search(cand & ~bit(pivot) & ~nb_[pivot], chosen | bit(pivot), size + 1);
    search(cand & ~bit(pivot), chosen, size);
  }

  const std::vector<Mask>& nb_;
  int best_ = 0;
  Mask best_set_ = 0;
};

class CliqueCover {
 public:
  CliqueCover(const std::vector<Mask>& mutual, std::size_t lower_bound, Mask seed_independent)
      : nb_(mutual), lower_(lower_bound) {
    const std::size_t k = mutual.size();
    for (Mask c = seed_independent; c; c &= c - 1) order_.push_back(std::countr_zero(c));
    std::vector<int> rest;
    for (std::size_t v = 0; v < k; ++v)
      if (!(seed_independent & bit(v))) rest.push_back(static_cast<int>(v));
    std::stable_sort(rest.begin(), rest.end(), [&](int a, int b) {
      return std::popcount(nb_[a]) < std::popcount(nb_[b]);
    });
    order_.insert(order_.end(), rest.begin(), rest.end());
    best_ = k;
  }

  std::size_t solve() {
    std::vector<Mask> cliques;
    cliques.reserve(order_.size());
    search(0, cliques);
    return best_;
  }

 private:
  void search(std::size_t pos, std::vector<Mask>& cliques) {
    if (done_) return;
    if (cliques.size() >= best_) return;
    if (pos == order_.size()) {
      best_ = cliques.size();
      if (best_ <= lower_) done_ = true;
      return;
    }
    const int v = order_[pos];
    for (Mask& c : cliques) {
      if ((c & ~nb_[v]) == 0) {
        c |= bit(v);
        search(pos + 1, cliques);
        c &= ~bit(v);
        if (done_) return;
      }
    }
    cliques.push_back(bit(v));
    search(pos + 1, cliques);
    cliques.pop_back();
  }

  const std::vector<Mask>& nb_;
  std::size_t lower_;
  std::vector<int> order_;
  std::size_t best_;
  bool done_ = false;
};

inline Mask full_mask(std::size_t k) { return k == 32 ? ~Mask{0} : (bit(k) - 1); }

}  // namespace detail

/// Exact independence number of the underlying undirected graph.
inline std::size_t independence_number(const FeedbackGraph& g,
                                       std::size_t limit = kExactSearchLimit) {
  detail::check_limit(g, limit);
  const auto nb = detail::any_arc_masks(g);
  detail::MaxIndependentSet mis(nb);
  return static_cast<std::size_t>(std::popcount(mis.solve(detail::full_mask(g.k()))));
}

/// Largest vertex subset whose induced subgraph has no directed cycle.
/// Subset DP: S is acyclic iff it has a source v and S \ {v} is acyclic.
inline std::size_t mas_number(const FeedbackGraph& g, std::size_t limit = kExactSearchLimit) {
  detail::check_limit(g, limit);
  const std::size_t k = g.k();
  std::vector<detail::Mask> in(k, 0);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j)
      if (i != j && g.has_arc(j, i)) in[i] |= detail::bit(j);

  const std::size_t n = std::size_t{1} << k;
  std::vector<std::uint8_t> acyclic(n, 0);
  acyclic[0] = 1;
  int best = 0;
  for (std::size_t s = 1; s < n; ++s) {
    const auto set = static_cast<detail::Mask>(s);
    for (detail::Mask c = set; c; c &= c - 1) {
      const int v = std::countr_zero(c);
      if ((in[v] & set) == 0) {
        acyclic[s] = acyclic[s & ~std::size_t{detail::bit(v)}];
        break;
      }
    }
    if (acyclic[s]) best = std::max(best, std::popcount(set));
  }
  return static_cast<std::size_t>(best);
}

/// Minimum number of cliques (mutually linked vertex sets) partitioning the arms.
inline std::size_t clique_cover_number(const FeedbackGraph& g,
                                       std::size_t limit = kExactSearchLimit) {
  detail::check_limit(g, limit);
  const auto mutual = detail::mutual_arc_masks(g);
  // Pairwise non-adjacent vertices in the mutual graph need distinct cliques.
  detail::MaxIndependentSet mis(mutual);
  const detail::Mask seed = mis.solve(detail::full_mask(g.k()));
  detail::CliqueCover cover(mutual, static_cast<std::size_t>(std::popcount(seed)), seed);
  return cover.solve();
}

inline GraphMetrics compute_metrics(const FeedbackGraph& g, std::size_t limit = kExactSearchLimit) {
  return {independence_number(g, limit), mas_number(g, limit), clique_cover_number(g, limit)};
}

}  // namespace latentbandit
