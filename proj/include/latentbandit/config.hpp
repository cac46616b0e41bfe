#pragma once

#include <charconv>
#include <cstddef>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "latentbandit/bandit.hpp"
#include "latentbandit/graph.hpp"
#include "latentbandit/graph_json.hpp"
#include "latentbandit/policies.hpp"
#include "latentbandit/sim.hpp"

namespace latentbandit {

namespace detail {

inline std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline double parse_real(std::string_view s, std::string_view what) {
  double v = 0.0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty())
    throw InvalidConfig("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

inline std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc{} || ptr != end || s.empty())
    throw InvalidConfig("cannot parse " + std::string(what) + " '" + std::string(s) + "'");
  return v;
}

}  // namespace detail

/// Graph mini-language:
///   empty | complete | cliques:<n1>,<n2>,... | total-order | er:<plow>,<phigh>,<dir|undir>
inline GraphSpec parse_graph_spec(std::string_view text, std::size_t k) {
  const std::string label(text);
  if (text == "empty") return {label, make_graph(GraphKind::empty, k)};
  if (text == "complete") return {label, make_graph(GraphKind::complete, k)};
  if (text == "total-order") return {label, make_graph(GraphKind::total_order, k)};
  if (text.starts_with("cliques:")) {
    std::vector<std::size_t> sizes;
    for (auto part : detail::split(text.substr(8), ','))
      sizes.push_back(detail::parse_count(part, "clique size"));
    return {label, make_graph(GraphKind::cliques, k, false, sizes)};
  }
  if (text.starts_with("er:")) {
    const auto parts = detail::split(text.substr(3), ',');
    if (parts.size() != 3)
      throw InvalidConfig("Erdos-Renyi spec must be er:<plow>,<phigh>,<dir|undir>");
    ErdosRenyiSpec er;
    er.k = k;
    er.p_low = detail::parse_real(parts[0], "p_low");
    er.p_high = detail::parse_real(parts[1], "p_high");
    if (parts[2] == "dir")
      er.directed = true;
    else if (parts[2] == "undir")
      er.directed = false;
    else
      throw InvalidConfig("Erdos-Renyi orientation must be 'dir' or 'undir'");
    er.validate();
    return {label, er};
  }
  throw InvalidConfig("unknown graph spec '" + label + "'");
}

inline GraphSpec load_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidConfig("cannot open graph file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidConfig("graph file '" + path + "': " + e.what());
  }
  return {"file:" + path, graph_from_json(j)};
}

/// none | fixed:<eps> | inv-sqrt-T | inv-t
inline ExplorationSchedule parse_schedule(std::string_view text, std::size_t horizon) {
  if (text == "none") return ExplorationSchedule::none();
  if (text == "inv-sqrt-T") return ExplorationSchedule::inv_sqrt_T(horizon);
  if (text == "inv-t") return ExplorationSchedule::inv_t();
  if (text.starts_with("fixed:"))
    return ExplorationSchedule::fixed(detail::parse_real(text.substr(6), "exploration rate"));
  throw InvalidConfig("unknown schedule '" + std::string(text) + "'");
}

/// Default schedule per policy: TS-U uses eps_t = 1/t, the others none.
inline ExplorationSchedule default_schedule(PolicyKind kind) {
  return kind == PolicyKind::ts_u ? ExplorationSchedule::inv_t() : ExplorationSchedule::none();
}

/// Flag values before validation. Mirrors the command-line surface and the
/// JSON config file.
struct SimulateOptions {
  std::string policy = "ts-n";
  std::string schedule;  // empty: policy default
  std::size_t arms = 5;
  std::size_t horizon = 1000;
  std::size_t trials = 1000;
  std::string graph = "empty";
  std::string graph_file;
  std::uint64_t seed = 0;
  std::size_t workers = 1;
  std::string out;
  bool raw = false;
  bool paired_graphs = false;

  /// Overwrites fields present in `j`.
  void merge_json(const nlohmann::json& j) {
    try {
      for (const auto& [key, value] : j.items()) {
        if (key == "policy") policy = value.get<std::string>();
        else if (key == "schedule") schedule = value.get<std::string>();
        else if (key == "arms") arms = value.get<std::size_t>();
        else if (key == "horizon") horizon = value.get<std::size_t>();
        else if (key == "trials") trials = value.get<std::size_t>();
        else if (key == "graph") graph = value.get<std::string>();
        else if (key == "graph_file") graph_file = value.get<std::string>();
        else if (key == "seed") seed = value.get<std::uint64_t>();
        else if (key == "workers") workers = value.get<std::size_t>();
        else if (key == "out") out = value.get<std::string>();
        else if (key == "raw") raw = value.get<bool>();
        else if (key == "paired_graphs") paired_graphs = value.get<bool>();
        else throw InvalidConfig("unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw InvalidConfig(std::string("config file: ") + e.what());
    }
  }

  ExperimentConfig to_config() const {
    ExperimentConfig cfg;
    cfg.k = arms;
    cfg.horizon = horizon;
    cfg.trials = trials;
    cfg.policy.kind = parse_policy(policy);
    cfg.policy.schedule =
        schedule.empty() ? default_schedule(cfg.policy.kind) : parse_schedule(schedule, horizon);
    cfg.graph = graph_file.empty() ? parse_graph_spec(graph, arms) : load_graph_file(graph_file);
    cfg.seed = seed;
    cfg.workers = workers;
    cfg.out = out;
    cfg.paired_graphs = paired_graphs;
    cfg.validate();
    return cfg;
  }
};

}  // namespace latentbandit
