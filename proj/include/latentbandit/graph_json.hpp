#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "latentbandit/graph.hpp"

namespace latentbandit {

/// {"k": int, "directed": bool, "arcs": [[i, j], ...]} with 1-based arms.
/// Self-loops are implied and never written; undirected edges appear once
/// with i < j.
inline nlohmann::json graph_to_json(const FeedbackGraph& g) {
  nlohmann::json arcs = nlohmann::json::array();
  for (std::size_t i = 0; i < g.k(); ++i) {
    for (std::size_t j = 0; j < g.k(); ++j) {
      if (i == j || !g.has_arc(i, j)) continue;
      if (!g.directed() && j < i) continue;
      arcs.push_back({i + 1, j + 1});
    }
  }
  return {{"k", g.k()}, {"directed", g.directed()}, {"arcs", std::move(arcs)}};
}

inline FeedbackGraph graph_from_json(const nlohmann::json& j) {
  try {
    const auto k = j.at("k").get<long long>();
    if (k < 1) throw InvalidConfig("graph literal: k must be positive");
    FeedbackGraph g(static_cast<std::size_t>(k), j.value("directed", false));
    for (const auto& arc : j.value("arcs", nlohmann::json::array())) {
      if (!arc.is_array() || arc.size() != 2)
        throw InvalidConfig("graph literal: each arc must be a pair [i, j]");
      const auto from = arc[0].get<long long>();
      const auto to = arc[1].get<long long>();
      if (from < 1 || to < 1 || from > k || to > k)
        throw InvalidConfig("graph literal: arc endpoint out of range 1.." + std::to_string(k));
      g.add_arc(static_cast<std::size_t>(from - 1), static_cast<std::size_t>(to - 1));
    }
    return g;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig(std::string("graph literal: ") + e.what());
  }
}

}  // namespace latentbandit
