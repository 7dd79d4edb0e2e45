// r1w1: command-line front-end for the engine, verifier and transformer.
//
// Exit status: 0 verdict holds, 1 verdict fails, 2 usage error,
// 3 refused or aborted (state-space cap, invalid input).

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "r1w1/algorithms.hpp"
#include "r1w1/io.hpp"

namespace {

using namespace r1w1;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRefused = 3;

struct CommonOptions {
  std::string alg = "mmat11";
  std::string graph = "path:3";
  std::string out;
};

struct RunOptions {
  std::string daemon = "random:0";
  std::string init = "all-bottom";
  std::int64_t max_moves = -1;
  std::string witness = "lowest";
  std::uint64_t witness_seed = 0;
  std::string trace;
};

struct VerifyOptions {
  std::string graphs;
  std::uint64_t cap = kDefaultStateCap;
};

struct TransformOptions {
  int K = 2;
  int n_prime = 0;
  std::uint64_t seed = 0;
  int start_phase = 1;
  std::int64_t max_cycles = 100'000;
  std::string init;
  std::string cache = "random";
};

struct FaultOptions {
  std::string plan;
  std::int64_t settle_rounds = 0;
};

struct SweepOptions {
  std::string n = "5..40";
  int seeds = 10;
  std::string family = "gnp";
  double p = 0.2;
};

// Explicit --out wins; otherwise $R1W1_OUT_DIR/<fallback> when the variable is set.
std::string resolve_output(const std::string& out, const std::string& fallback) {
  const char* env = std::getenv("R1W1_OUT_DIR");
  const std::filesystem::path dir = env != nullptr ? env : "";
  if (!out.empty()) {
    const std::filesystem::path path(out);
    return (path.is_relative() && !dir.empty() ? dir / path : path).string();
  }
  if (dir.empty() || fallback.empty()) return {};
  return (dir / fallback).string();
}

void write_file(const std::string& path, const std::string& text) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream file(path, std::ios::binary);
  if (!file) throw std::runtime_error("cannot write '" + path + "'");
  file << text;
}

void emit(const std::string& text, const std::string& out, const std::string& fallback) {
  std::cout << text;
  const std::string path = resolve_output(out, fallback);
  if (!path.empty()) write_file(path, text);
}

Json states_of(const Algorithm& alg, const Configuration& cfg) {
  return configuration_to_json(alg, cfg)["states"];
}

Json solution_of(const Algorithm& alg, const Graph& g, const Configuration& cfg) {
  if (alg.kind() == AlgorithmKind::kMinimalKDomination ||
      alg.kind() == AlgorithmKind::kMaximalKDependence) {
    Json members = Json::array();
    const auto in = member_set(cfg);
    for (ProcessId i = 0; i < g.size(); ++i) {
      if (in[i]) members.push_back(i);
    }
    return Json{{"members", members}};
  }
  Json pairs = Json::array();
  for (const auto& [a, b] : matched_pairs(g, cfg)) pairs.push_back({a, b});
  return Json{{"matching", pairs}};
}

int cmd_run(const CommonOptions& common, const RunOptions& opts) {
  const auto alg = parse_algorithm(common.alg);
  const Graph g = load_graph(common.graph);
  const Configuration initial = load_initial(*alg, g, opts.init);

  ExecuteOptions exec;
  if (opts.max_moves >= 0) exec.max_moves = opts.max_moves;
  if (opts.witness == "random") {
    exec.witness = WitnessPolicy::kSeededRandom;
  } else if (opts.witness != "lowest") {
    throw CLI::ValidationError("--witness", "expected 'lowest' or 'random'");
  }
  exec.witness_seed = opts.witness_seed;
  const Trace trace = execute(*alg, g, initial, parse_daemon(opts.daemon), exec);

  const bool legit = alg->legitimate(g, trace.final_config);
  std::string status;
  if (trace.budget_exhausted) {
    status = "budget exhausted";
  } else if (legit) {
    status = "legitimate";
  } else {
    status = "silent but not legitimate";
  }

  Json per_rule = Json::object();
  for (RuleId r = 1; r <= alg->rule_count(); ++r) per_rule[alg->rule_label(r)] = trace.rule_total(r);

  Json summary{{"algorithm", alg->name()},
               {"graph", describe(g)},
               {"initial", states_of(*alg, trace.initial)},
               {"moves", trace.move_count()},
               {"per_rule", per_rule},
               {"final", states_of(*alg, trace.final_config)},
               {"silent", trace.silent},
               {"legitimate", legit},
               {"oracle", trace.silent ? oracle_accepts(*alg, g, trace.final_config) : false},
               {"bound", analytic_move_bound(*alg, g)},
               {"status", status}};
  summary.update(solution_of(*alg, g, trace.final_config));

  if (alg->kind() == AlgorithmKind::kMaximalMatching) {
    Json timeline = Json::array();
    Configuration cfg = trace.initial;
    auto push = [&] {
      const auto p = mmat_potentials(g, cfg);
      timeline.push_back({p.matched, p.dangling});
    };
    push();
    for (const MoveRecord& m : trace.moves) {
      cfg = apply_writes(cfg, m.writes);
      push();
    }
    summary["potentials"] = timeline;
  }

  if (!opts.trace.empty()) {
    std::ostringstream lines;
    write_trace_jsonl(lines, *alg, trace);
    write_file(resolve_output(opts.trace, ""), lines.str());
  }

  emit(summary.dump(2) + "\n", common.out, "run.json");
  if (trace.budget_exhausted) std::cerr << "budget exhausted after " << trace.move_count() << " moves\n";
  return trace.silent && legit ? kExitPass : kExitFail;
}

std::vector<Graph> verify_corpus(const CommonOptions& common, const VerifyOptions& opts) {
  if (opts.graphs.empty()) return {load_graph(common.graph)};
  const std::string prefix = "all-connected:n<=";
  if (opts.graphs.rfind(prefix, 0) != 0) {
    throw CLI::ValidationError("--graphs", "expected all-connected:n<=N");
  }
  const int limit = std::stoi(opts.graphs.substr(prefix.size()));
  if (limit < 1 || limit > 6) throw CLI::ValidationError("--graphs", "N must be in 1..6");
  std::vector<Graph> corpus;
  for (int n = 1; n <= limit; ++n) {
    for (Graph& g : all_connected_graphs(n)) corpus.push_back(std::move(g));
  }
  return corpus;
}

int cmd_verify(const CommonOptions& common, const VerifyOptions& opts) {
  const auto alg = parse_algorithm(common.alg);
  Json reports = Json::array();
  bool pass = true;
  for (const Graph& g : verify_corpus(common, opts)) {
    const VerificationReport report = verify(*alg, g, opts.cap);
    pass = pass && report.pass();
    reports.push_back(report_to_json(*alg, report));
  }
  const Json doc{{"algorithm", alg->name()}, {"pass", pass}, {"reports", reports}};
  emit(doc.dump(2) + "\n", common.out, "verify.json");
  return pass ? kExitPass : kExitFail;
}

TrParams transformer_params(const TransformOptions& opts) {
  TrParams params;
  params.K = opts.K;
  if (opts.n_prime > 0) params.n_prime = opts.n_prime;
  params.seed = opts.seed;
  params.start_phase = opts.start_phase;
  params.max_cycles = opts.max_cycles;
  if (opts.cache == "coherent") {
    params.cache_init = CacheInit::kCoherent;
  } else if (opts.cache == "random") {
    params.cache_init = CacheInit::kRandom;
  } else {
    throw CLI::ValidationError("--cache", "expected 'coherent' or 'random'");
  }
  return params;
}

std::string transformer_init(const TransformOptions& opts) {
  return opts.init.empty() ? "random:" + std::to_string(opts.seed) : opts.init;
}

int cmd_transform(const CommonOptions& common, const TransformOptions& opts) {
  const auto alg = parse_algorithm(common.alg);
  const Graph g = load_graph(common.graph);
  const Configuration initial = load_initial(*alg, g, transformer_init(opts));
  const TrParams params = transformer_params(opts);
  validate(params, g.size());

  const TransformResult result = run_transformed(*alg, g, initial, params);
  const bool legit = alg->legitimate(g, result.trace.final_config);
  Json doc = metrics_to_json(result.metrics);
  doc["algorithm"] = alg->name();
  doc["graph"] = describe(g);
  doc["initial"] = states_of(*alg, initial);
  doc["final"] = states_of(*alg, result.trace.final_config);
  doc["legitimate"] = legit;
  doc["bound"] = analytic_move_bound(*alg, g);
  doc["bcast_reference"] = 5 * static_cast<std::int64_t>(g.size()) * result.metrics.cycles;
  doc.update(solution_of(*alg, g, result.trace.final_config));
  emit(doc.dump(2) + "\n", common.out, "transform.json");
  const bool pass = result.metrics.converged && legit && result.metrics.exclusion_violations == 0;
  return pass ? kExitPass : kExitFail;
}

int cmd_fault(const CommonOptions& common, const TransformOptions& topts, const FaultOptions& opts) {
  const auto alg = parse_algorithm(common.alg);
  const Graph g = load_graph(common.graph);
  const Configuration initial = load_initial(*alg, g, transformer_init(topts));
  const TrParams params = transformer_params(topts);
  validate(params, g.size());

  Simulator sim(*alg, g, initial, params);
  const bool converged_before = sim.run_until_silent(params.max_cycles);
  const std::int64_t post_round = sim.rounds();
  const std::int64_t post_cycle = sim.cycle_index();
  const std::int64_t moves_before = sim.metrics().moves;
  const FaultPlan plan = parse_fault_plan(opts.plan, post_round, post_cycle);

  std::int64_t window_end = post_round;
  for (const Fault& f : plan.faults) {
    if (const auto* d = std::get_if<DropAllMessages>(&f)) window_end = std::max(window_end, d->last_round + 1);
    if (const auto* d = std::get_if<DropRandomMessages>(&f)) window_end = std::max(window_end, d->last_round + 1);
    if (const auto* c = std::get_if<CorruptState>(&f)) {
      if (c->at_cycle < post_cycle) throw CLI::ValidationError("--plan", "corrupt cycle precedes convergence");
    }
  }
  sim.set_fault_plan(plan);

  // Track legitimacy round by round through any drop window.
  std::int64_t illegitimate_rounds = 0;
  while (sim.rounds() < window_end + opts.settle_rounds) {
    sim.step();
    if (!alg->legitimate(g, sim.projected())) ++illegitimate_rounds;
  }
  if (sim.phase() != 1) sim.finish_cycle();
  const bool reconverged = sim.run_until_silent(params.max_cycles);
  const Configuration final_config = sim.projected();
  const bool legit = alg->legitimate(g, final_config);
  const RunMetrics metrics = sim.metrics();
  const std::int64_t moves_after = metrics.moves - moves_before;
  const std::int64_t bound = analytic_move_bound(*alg, g);

  Json doc{{"algorithm", alg->name()},
           {"graph", describe(g)},
           {"plan", opts.plan},
           {"converged_before_faults", converged_before},
           {"post_round", post_round},
           {"post_cycle", post_cycle},
           {"illegitimate_rounds_in_window", illegitimate_rounds},
           {"reconverged", reconverged},
           {"legitimate", legit},
           {"moves_after_faults", moves_after},
           {"bound", bound},
           {"final", states_of(*alg, final_config)},
           {"metrics", metrics_to_json(metrics)}};
  emit(doc.dump(2) + "\n", common.out, "fault.json");

  bool corrupting = false;
  for (const Fault& f : plan.faults) corrupting = corrupting || std::holds_alternative<CorruptState>(f);
  const bool pass = converged_before && reconverged && legit && moves_after <= bound &&
                    (corrupting || illegitimate_rounds == 0);
  return pass ? kExitPass : kExitFail;
}

std::pair<int, int> parse_size_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) {
      const int n = std::stoi(text);
      return {n, n};
    }
    return {std::stoi(text.substr(0, dots)), std::stoi(text.substr(dots + 2))};
  } catch (const std::logic_error&) {
    throw CLI::ValidationError("--n", "expected N or A..B");
  }
}

Graph sweep_graph(const SweepOptions& opts, int n, std::uint64_t seed) {
  GraphRecipe recipe;
  recipe.n = n;
  recipe.seed = seed;
  if (opts.family == "gnp") {
    recipe.kind = GraphKind::kGnp;
    recipe.probability = opts.p;
    recipe.require_connected = true;
  } else if (opts.family == "tree") {
    recipe.kind = GraphKind::kTree;
  } else if (opts.family == "path") {
    recipe.kind = GraphKind::kPath;
  } else if (opts.family == "cycle") {
    recipe.kind = GraphKind::kCycle;
  } else if (opts.family == "star") {
    recipe.kind = GraphKind::kStar;
  } else if (opts.family == "complete") {
    recipe.kind = GraphKind::kComplete;
  } else {
    throw CLI::ValidationError("--family", "unknown family '" + opts.family + "'");
  }
  return generate(recipe);
}

int cmd_sweep(const CommonOptions& common, const TransformOptions& topts, const SweepOptions& opts) {
  const auto alg = parse_algorithm(common.alg);
  const auto [lo, hi] = parse_size_range(opts.n);
  if (lo < 1 || hi < lo) throw CLI::ValidationError("--n", "empty size range");
  if (opts.seeds < 1) throw CLI::ValidationError("--seeds", "must be positive");

  std::ostringstream csv;
  csv << "n,seed,cycles,rounds,bcasts,moves,converged\n";
  bool pass = true;
  for (int n = lo; n <= hi; ++n) {
    for (int s = 0; s < opts.seeds; ++s) {
      const auto seed = static_cast<std::uint64_t>(s);
      const Graph g = sweep_graph(opts, n, seed);
      TrParams params = transformer_params(topts);
      params.seed = seed;
      const Configuration initial = make_initial(*alg, g, "random:" + std::to_string(seed));
      const TransformResult r = run_transformed(*alg, g, initial, params);
      const bool ok = r.metrics.converged && alg->legitimate(g, r.trace.final_config) &&
                      r.metrics.moves <= analytic_move_bound(*alg, g);
      pass = pass && ok;
      csv << n << ',' << seed << ',' << r.metrics.cycles << ',' << r.metrics.rounds << ','
          << r.metrics.bcasts << ',' << r.metrics.moves << ',' << (r.metrics.converged ? 1 : 0)
          << '\n';
    }
  }
  emit(csv.str(), common.out, "sweep.csv");
  return pass ? kExitPass : kExitFail;
}

void add_common(CLI::App* cmd, CommonOptions& common, bool graph = true) {
  cmd->add_option("--alg", common.alg, "mmat11, mkdom11:k=K, mkdep11:k=K or broken-fixture")
      ->capture_default_str();
  if (graph) {
    cmd->add_option("--graph", common.graph, "graph JSON file or generator descriptor")
        ->capture_default_str();
  }
  cmd->add_option("--out", common.out,
                  "output file (relative paths resolve under $R1W1_OUT_DIR when set)");
}

void add_transformer(CLI::App* cmd, TransformOptions& t) {
  cmd->add_option("--K", t.K, "vote range multiplier (R = K * n')")->capture_default_str();
  cmd->add_option("--n-prime", t.n_prime, "upper bound on n used for R (default n)");
  cmd->add_option("--seed", t.seed, "simulation seed")->capture_default_str();
  cmd->add_option("--start-phase", t.start_phase, "phase of the first round (1..5)")
      ->check(CLI::Range(1, 5))
      ->capture_default_str();
  cmd->add_option("--max-cycles", t.max_cycles, "cycle budget")->capture_default_str();
  cmd->add_option("--init", t.init, "initial configuration (default random:<seed>)");
  cmd->add_option("--cache", t.cache, "initial caches: random or coherent")->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate, verify and transform neighborhood-writing self-stabilizing algorithms"};
  app.set_config("--config", "", "TOML/INI file with option defaults");
  app.require_subcommand(1);

  CommonOptions common;
  RunOptions run;
  VerifyOptions ver;
  TransformOptions tr;
  FaultOptions fault;
  SweepOptions sweep;

  auto* run_cmd = app.add_subcommand("run", "execute under a central daemon");
  add_common(run_cmd, common);
  run_cmd->add_option("--daemon", run.daemon, "random:<seed>, round-robin, greedy, scripted:<ids>")
      ->capture_default_str();
  run_cmd->add_option("--init", run.init, "preset or file:<path>")->capture_default_str();
  run_cmd->add_option("--max-moves", run.max_moves, "move budget (default 10n+100)");
  run_cmd->add_option("--witness", run.witness, "lowest or random")->capture_default_str();
  run_cmd->add_option("--witness-seed", run.witness_seed, "seed for random witnesses");
  run_cmd->add_option("--trace", run.trace, "write moves as JSON lines");

  auto* verify_cmd = app.add_subcommand("verify", "exhaustive closure and convergence check");
  add_common(verify_cmd, common);
  verify_cmd->add_option("--graphs", ver.graphs, "corpus, e.g. all-connected:n<=4");
  verify_cmd->add_option("--cap", ver.cap, "state-space cap")->capture_default_str();

  auto* transform_cmd = app.add_subcommand("transform", "run the message-passing simulation");
  add_common(transform_cmd, common);
  add_transformer(transform_cmd, tr);

  auto* fault_cmd = app.add_subcommand("fault", "converge, inject faults, re-converge");
  add_common(fault_cmd, common);
  add_transformer(fault_cmd, tr);
  fault_cmd->add_option("--plan", fault.plan, "e.g. drop_all:rounds=post+1..post+10")->required();
  fault_cmd->add_option("--settle-rounds", fault.settle_rounds,
                        "extra rounds checked after the drop window");

  auto* sweep_cmd = app.add_subcommand("sweep", "transform over sizes and seeds, CSV output");
  add_common(sweep_cmd, common, false);
  add_transformer(sweep_cmd, tr);
  sweep_cmd->add_option("--n", sweep.n, "size or range A..B")->capture_default_str();
  sweep_cmd->add_option("--seeds", sweep.seeds, "seeds 0..N-1 per size")->capture_default_str();
  sweep_cmd->add_option("--family", sweep.family, "gnp, tree, path, cycle, star, complete")
      ->capture_default_str();
  sweep_cmd->add_option("--p", sweep.p, "edge probability for gnp")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(common, run);
    if (*verify_cmd) return cmd_verify(common, ver);
    if (*transform_cmd) return cmd_transform(common, tr);
    if (*fault_cmd) return cmd_fault(common, tr, fault);
    if (*sweep_cmd) return cmd_sweep(common, tr, sweep);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const StateSpaceTooLarge& e) {
    std::cerr << "refused: " << e.what() << '\n';
    return kExitRefused;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRefused;
  }
  return kExitUsage;
}
