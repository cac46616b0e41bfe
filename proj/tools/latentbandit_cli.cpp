// Command-line front end: simulate, metrics, verify.
//
// Exit codes: 0 success, 1 verification failure, 2 invalid flags or
// configuration, 3 runtime or numeric failure, 4 graph too large for exact
// search, 5 verification inconclusive.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "latentbandit.hpp"

namespace lb = latentbandit;

namespace {

enum Exit : int {
  kOk = 0,
  kVerifyFailed = 1,
  kBadFlags = 2,
  kRuntime = 3,
  kSizeLimit = 4,
  kInconclusive = 5,
};

int run_simulate(lb::SimulateOptions opts, const std::string& config_path,
                 const CLI::App& cmd) {
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw lb::InvalidConfig("cannot open config file '" + config_path + "'");
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw lb::InvalidConfig(std::string("config file: ") + e.what());
    }
    // Explicit flags win over the config file.
    lb::SimulateOptions from_file;
    from_file.merge_json(j);
    auto pick = [&](const char* flag, auto& field, const auto& file_value) {
      if (cmd.count(flag) == 0) field = file_value;
    };
    pick("--policy", opts.policy, from_file.policy);
    pick("--schedule", opts.schedule, from_file.schedule);
    pick("--arms", opts.arms, from_file.arms);
    pick("--horizon", opts.horizon, from_file.horizon);
    pick("--trials", opts.trials, from_file.trials);
    pick("--graph", opts.graph, from_file.graph);
    pick("--graph-file", opts.graph_file, from_file.graph_file);
    pick("--seed", opts.seed, from_file.seed);
    pick("--workers", opts.workers, from_file.workers);
    pick("--out", opts.out, from_file.out);
    pick("--raw", opts.raw, from_file.raw);
    pick("--paired-graphs", opts.paired_graphs, from_file.paired_graphs);
  }
  if (opts.out.empty()) throw lb::InvalidConfig("--out is required");
  const lb::ExperimentConfig cfg = opts.to_config();

  const auto traces = lb::run_trials(cfg);
  const auto curve = lb::aggregate(traces);
  const std::string policy(lb::policy_name(cfg.policy.kind));

  std::ostringstream csv;
  lb::write_curve_csv(csv, policy, cfg.graph.label, curve);
  if (opts.raw) {
    std::ostringstream raw;
    lb::write_raw_csv(raw, policy, cfg.graph.label, traces);
    lb::write_file_atomic(lb::raw_path_for(cfg.out), raw.str());
  }
  lb::write_file_atomic(cfg.out, csv.str());
  return kOk;
}

int run_metrics(const std::string& spec, const std::string& file, std::size_t arms,
                std::size_t limit) {
  const lb::GraphSpec g = file.empty() ? lb::parse_graph_spec(spec, arms) : lb::load_graph_file(file);
  const auto* fixed = std::get_if<lb::FeedbackGraph>(&g.kind);
  if (fixed == nullptr) throw lb::InvalidConfig("metrics need a fixed graph, not a random family");
  const lb::GraphMetrics m = lb::compute_metrics(*fixed, limit);
  std::cout << nlohmann::ordered_json{{"beta0", m.beta0}, {"mas", m.mas}, {"chi", m.chi}}.dump() << '\n';
  return kOk;
}

struct VerifyFlags {
  std::string suite = "all";
  std::uint64_t seed = 1;
  std::size_t cases = 0;    // 0: suite default
  std::size_t samples = 1000000;
  std::size_t trials = 500;
  std::size_t workers = 1;
};

int run_verify(const VerifyFlags& f) {
  bool failed = false;
  bool inconclusive = false;
  const bool all = f.suite == "all";
  if (!all && f.suite != "lemmas" && f.suite != "prop1" && f.suite != "regret-bounds")
    throw lb::InvalidConfig("unknown suite '" + f.suite + "'");

  if (all || f.suite == "lemmas") {
    lb::QBoundSuiteOptions opt;
    opt.seed = f.seed;
    if (f.cases) opt.graphs = f.cases;
    const auto r = lb::run_q_bound_suite(opt);
    const std::string digest =
        lb::digest_hex("q-bounds;seed=" + std::to_string(f.seed) + ";graphs=" + std::to_string(opt.graphs));
    auto emit = [&](const char* name, std::size_t violations) {
      lb::VerificationRecord rec{name, digest, static_cast<double>(violations), 0.0, 0.0,
                                 violations == 0, false};
      std::cout << rec.to_json().dump() << '\n';
    };
    emit("q_le_beta0", r.violations_beta0);
    emit("q_le_mas", r.violations_mas);
    emit("q_le_chi", r.violations_chi);
    emit("floored_q_le_log_bound", r.violations_floored);
    emit("metric_ordering", r.violations_ordering);
    failed |= !r.pass();
  }
  if (all || f.suite == "prop1") {
    lb::InfoRatioSuiteOptions opt;
    opt.seed = f.seed;
    opt.samples = f.samples;
    opt.workers = f.workers;
    if (f.cases) opt.cases = f.cases;
    const auto r = lb::run_info_ratio_suite(opt);
    for (const auto& rep : r.reports) std::cout << rep.record().to_json().dump() << '\n';
    failed |= r.failures > 0;
    inconclusive |= r.inconclusive_rate() > 0.05;
  }
  if (all || f.suite == "regret-bounds") {
    lb::RegretBoundOptions opt;
    opt.seed = f.seed;
    opt.trials = f.trials;
    opt.workers = f.workers;
    for (const auto& c : lb::run_regret_bound_suite(opt)) {
      std::cout << c.record().to_json().dump() << '\n';
      failed |= !c.pass;
    }
  }
  if (failed) return kVerifyFailed;
  if (inconclusive) return kInconclusive;
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph-feedback bandit laboratory"};
  app.require_subcommand(1);

  lb::SimulateOptions sim;
  std::string config_path;
  auto* simulate = app.add_subcommand("simulate", "Run trials and write the mean regret curve as CSV");
  simulate->add_option("--policy", sim.policy, "ts-n | ts-u | ucb-n | uniform");
  simulate->add_option("--schedule", sim.schedule, "none | fixed:<e> | inv-sqrt-T | inv-t");
  simulate->add_option("--arms", sim.arms);
  simulate->add_option("--horizon", sim.horizon);
  simulate->add_option("--trials", sim.trials);
  simulate->add_option("--graph", sim.graph,
                       "empty | complete | cliques:<sizes> | total-order | er:<plow>,<phigh>,<dir|undir>");
  simulate->add_option("--graph-file", sim.graph_file, "JSON graph literal");
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--workers", sim.workers);
  simulate->add_option("--out", sim.out);
  simulate->add_flag("--raw", sim.raw, "Also write per-trial curves to <out>.raw.csv");
  simulate->add_flag("--paired-graphs", sim.paired_graphs,
                     "Share graph sequences across policies for the same trial");
  simulate->add_option("--config", config_path, "JSON file mirroring the flags");

  std::string metric_spec = "empty";
  std::string metric_file;
  std::size_t metric_arms = 5;
  std::size_t metric_limit = lb::kExactSearchLimit;
  auto* metrics = app.add_subcommand("metrics", "Exact beta0, mas and chi of a graph");
  metrics->add_option("--graph", metric_spec);
  metrics->add_option("--graph-file", metric_file);
  metrics->add_option("--arms", metric_arms);
  metrics->add_option("--limit", metric_limit, "Exact-search arm limit");

  VerifyFlags vf;
  auto* verify = app.add_subcommand("verify", "Run bound verification suites");
  verify->add_option("--suite", vf.suite, "lemmas | prop1 | regret-bounds | all");
  verify->add_option("--seed", vf.seed);
  verify->add_option("--cases", vf.cases, "Graphs (lemmas) or posteriors (prop1)");
  verify->add_option("--samples", vf.samples, "Monte Carlo draws per posterior");
  verify->add_option("--trials", vf.trials, "Trials per regret-bound setting");
  verify->add_option("--workers", vf.workers);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kBadFlags;
  }

  try {
    if (*simulate) return run_simulate(sim, config_path, *simulate);
    if (*metrics) return run_metrics(metric_spec, metric_file, metric_arms, metric_limit);
    if (*verify) return run_verify(vf);
  } catch (const lb::InvalidConfig& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadFlags;
  } catch (const lb::SizeLimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kSizeLimit;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntime;
  }
  return kBadFlags;
}
