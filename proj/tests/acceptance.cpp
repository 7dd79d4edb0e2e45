// Acceptance checks, one PASS/FAIL line per criterion.
//
//   acceptance               run every criterion
//   acceptance --criterion 5 run one criterion
//
// Exit status is 0 iff every selected criterion passes.

#include <chrono>
#include <cmath>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "r1w1/algorithms.hpp"
#include "r1w1/transformer.hpp"
#include "r1w1/verifier.hpp"

using namespace r1w1;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    notes.push_back(std::string(ok ? "ok   " : "FAIL ") + what);
  }
};

template <typename... Parts>
std::string cat(const Parts&... parts) {
  std::ostringstream out;
  (out << ... << parts);
  return out.str();
}

struct NamedGraph {
  std::string name;
  Graph graph;
};

struct Case {
  std::string algorithm;
  NamedGraph graph;
};

std::vector<Case> exhaustive_corpus() {
  std::vector<Case> cases;
  for (int n = 1; n <= 4; ++n) {
    int idx = 0;
    for (const Graph& g : all_connected_graphs(n)) {
      cases.push_back({"mmat11", {cat("connected n=", n, " #", idx++), g}});
    }
  }
  cases.push_back({"mmat11", {"path:5", generate(parse_recipe("path:5"))}});
  cases.push_back({"mmat11", {"cycle:5", generate(parse_recipe("cycle:5"))}});
  const std::vector<std::string> small{"path:3", "cycle:4", "complete:3", "star:4", "star:5"};
  for (const char* alg : {"mkdom11:k=1", "mkdom11:k=2", "mkdep11:k=0", "mkdep11:k=1"}) {
    for (const auto& d : small) cases.push_back({alg, {d, generate(parse_recipe(d))}});
  }
  return cases;
}

// Exhaustive closure and convergence results, shared by criteria 1, 2 and 4.
struct ExhaustiveSummary {
  std::size_t instances = 0;
  std::uint64_t configs = 0;
  std::uint64_t closure_counterexamples = 0;
  std::uint64_t convergence_failures = 0;
  std::uint64_t bound_violations = 0;
  std::uint64_t oracle_failures = 0;
  std::uint64_t terminals = 0;
  std::vector<std::string> failures;
  double seconds = 0.0;
};

const ExhaustiveSummary& exhaustive() {
  static const ExhaustiveSummary summary = [] {
    ExhaustiveSummary s;
    const auto start = std::chrono::steady_clock::now();
    for (const Case& c : exhaustive_corpus()) {
      const auto alg = parse_algorithm(c.algorithm);
      const Graph& g = c.graph.graph;
      const ClosureResult closure = verify_closure(*alg, g);
      const std::int64_t bound = analytic_move_bound(*alg, g);
      const ConvergenceResult conv = verify_convergence(*alg, g, bound);
      ++s.instances;
      s.configs += closure.explored;
      s.terminals += conv.terminals;
      s.oracle_failures += closure.oracle_failures + conv.oracle_failures;
      if (!closure.pass) {
        ++s.closure_counterexamples;
        s.failures.push_back(cat(c.algorithm, " on ", c.graph.name, ": ", closure.detail));
      }
      if (conv.worst_moves > bound) ++s.bound_violations;
      if (!conv.pass) {
        ++s.convergence_failures;
        s.failures.push_back(cat(c.algorithm, " on ", c.graph.name, ": ", conv.detail));
      }
    }
    s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return s;
  }();
  return summary;
}

Outcome criterion1() {
  const auto& s = exhaustive();
  Outcome o;
  o.require(s.closure_counterexamples == 0,
            cat("legitimate <=> silent over ", s.configs, " configurations in ", s.instances,
                " instances, counterexamples = ", s.closure_counterexamples));
  o.require(s.seconds < 60.0, cat("exhaustive runtime ", std::fixed, std::setprecision(2),
                                  s.seconds, " s < 60 s"));
  for (const auto& f : s.failures) o.notes.push_back("     " + f);
  return o;
}

Outcome criterion2() {
  const auto& s = exhaustive();
  Outcome o;
  o.require(s.convergence_failures == 0,
            cat("every maximal path ends legitimate, failures = ", s.convergence_failures,
                " (terminal configurations ", s.terminals, ")"));
  o.require(s.bound_violations == 0,
            cat("longest path within floor(n/2)+n or 4n, violations = ", s.bound_violations));
  return o;
}

// Randomized trace audits, shared by criteria 3 and 4.
struct TraceSummary {
  std::map<std::string, TraceAudit> audits;
  std::map<std::string, std::int64_t> runs;
  std::map<std::string, std::int64_t> not_silent;
  std::int64_t oracle_failures = 0;
  std::int64_t silent_finals = 0;
};

void accumulate(TraceAudit& into, const TraceAudit& a) {
  into.matched_decreased += a.matched_decreased;
  into.dangling_increased += a.dangling_increased;
  into.potentials_unchanged += a.potentials_unchanged;
  into.fix_rule_repeated += a.fix_rule_repeated;
  into.fix_rule_not_first += a.fix_rule_not_first;
  into.rule2_over_twice += a.rule2_over_twice;
  into.rule3_over_once += a.rule3_over_once;
  into.count_destabilized += a.count_destabilized;
  into.bound_exceeded += a.bound_exceeded;
  into.replay_mismatch += a.replay_mismatch;
  into.write_locality += a.write_locality;
}

const TraceSummary& traces() {
  static const TraceSummary summary = [] {
    TraceSummary s;
    constexpr int kRuns = 1000;
    for (const std::string family : {"mmat11", "mkdom11", "mkdep11"}) {
      for (int run = 0; run < kRuns; ++run) {
        const auto seed = static_cast<std::uint64_t>(run);
        std::string selector = family;
        if (family == "mkdom11") selector += cat(":k=", 1 + run % 3);
        if (family == "mkdep11") selector += cat(":k=", run % 3);
        const auto alg = parse_algorithm(selector);
        std::mt19937_64 rng(seed * 7919 + 17);
        const int n = std::uniform_int_distribution<int>(2, 50)(rng);
        const double p = std::uniform_real_distribution<double>(0.05, 0.5)(rng);
        const Graph g = generate({GraphKind::kGnp, n, p, seed});
        ExecuteOptions opts;
        opts.witness = WitnessPolicy::kSeededRandom;
        opts.witness_seed = seed;
        // One run in four under the greedy adversary, the rest seeded random.
        const DaemonPolicy daemon =
            run % 4 == 3 ? DaemonPolicy(GreedyAdversarial{}) : DaemonPolicy(SeededRandom{seed});
        const Trace t = execute(*alg, g, random_configuration(*alg, g, rng), daemon, opts);
        accumulate(s.audits[family], audit_trace(*alg, g, t));
        ++s.runs[family];
        if (!t.silent) {
          ++s.not_silent[family];
        } else {
          ++s.silent_finals;
          if (!oracle_accepts(*alg, g, t.final_config)) ++s.oracle_failures;
        }
      }
    }
    return s;
  }();
  return summary;
}

Outcome criterion3() {
  const auto& s = traces();
  Outcome o;
  const TraceAudit& mm = s.audits.at("mmat11");
  o.require(mm.matched_decreased == 0, cat("matching: A nondecreasing over ", s.runs.at("mmat11"),
                                           " runs, violations = ", mm.matched_decreased));
  o.require(mm.dangling_increased == 0,
            cat("matching: B nonincreasing, violations = ", mm.dangling_increased,
                " (accepting one of several neighbors that point at a free process leaves the"
                " others dangling)"));
  o.require(mm.potentials_unchanged == 0,
            cat("matching: (A,B) changes on every move, violations = ", mm.potentials_unchanged));
  for (const std::string family : {"mkdom11", "mkdep11"}) {
    const TraceAudit& a = s.audits.at(family);
    o.require(a.fix_rule_repeated + a.fix_rule_not_first == 0,
              cat(family, ": Rule 1 at most once and first, violations = ",
                  a.fix_rule_repeated + a.fix_rule_not_first, " over ", s.runs.at(family), " runs"));
    o.require(a.rule3_over_once == 0, cat(family, ": Rule 3 at most once, violations = ", a.rule3_over_once));
    o.require(a.rule2_over_twice == 0, cat(family, ": Rule 2 at most twice, violations = ", a.rule2_over_twice));
    o.require(a.count_destabilized == 0,
              cat(family, ": c_i = Count_i() stays true once reached, violations = ", a.count_destabilized));
  }
  std::int64_t other = 0;
  std::int64_t stuck = 0;
  for (const auto& [family, a] : s.audits) {
    other += a.bound_exceeded + a.replay_mismatch + a.write_locality;
    stuck += s.not_silent.count(family) ? s.not_silent.at(family) : 0;
  }
  o.require(other == 0, cat("move bounds, replay and write locality, violations = ", other));
  o.require(stuck == 0, cat("runs that did not reach silence = ", stuck));
  return o;
}

Outcome criterion4() {
  const auto& e = exhaustive();
  const auto& t = traces();
  Outcome o;
  o.require(e.oracle_failures == 0,
            cat("exhaustive silent configurations rejected by the oracle = ", e.oracle_failures));
  o.require(t.oracle_failures == 0, cat("randomized silent finals rejected by the oracle = ",
                                        t.oracle_failures, " of ", t.silent_finals));
  return o;
}

Graph mixed_topology(int run, std::mt19937_64& rng) {
  const int n = std::uniform_int_distribution<int>(3, 30)(rng);
  const auto seed = static_cast<std::uint64_t>(run);
  switch (run % 6) {
    case 0: return generate({GraphKind::kPath, n});
    case 1: return generate({GraphKind::kCycle, n});
    case 2: return generate({GraphKind::kStar, n});
    case 3: return generate({GraphKind::kComplete, std::min(n, 12)});
    case 4: return generate({GraphKind::kTree, n, 0.0, seed});
    default: return generate({GraphKind::kGnp, n, 0.2, seed, true});
  }
}

const char* kSelectors[] = {"mmat11", "mkdom11:k=1", "mkdom11:k=2", "mkdep11:k=0", "mkdep11:k=1"};

Outcome criterion5() {
  Outcome o;
  std::int64_t runs = 0, cycles = 0, violations = 0, incoherent = 0, unconverged = 0;
  std::map<int, std::int64_t> per_start;
  for (int run = 0; runs < 20 || cycles < 1000; ++run) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(run) + 1000);
    const Graph g = mixed_topology(run, rng);
    const auto alg = parse_algorithm(kSelectors[run % 5]);
    TrParams p;
    p.seed = static_cast<std::uint64_t>(run);
    p.start_phase = 1 + run % 5;
    p.cache_init = CacheInit::kRandom;
    p.scramble_runtime = true;
    p.max_cycles = 10'000;
    const TransformResult r = run_transformed(*alg, g, random_configuration(*alg, g, rng), p);
    ++runs;
    ++per_start[p.start_phase];
    if (!r.metrics.converged || !alg->legitimate(g, r.trace.final_config)) ++unconverged;
    // A partial first cycle (start phase > 1) has no Phase 1 and is skipped.
    for (const CycleRecord& c : r.trace.cycles) {
      if (!c.metrics.has_phase1) continue;
      ++cycles;
      if (!check_exclusion(g, c.metrics.executed)) ++violations;
      if (!c.metrics.coherent) ++incoherent;
    }
  }
  o.require(runs >= 20 && cycles >= 1000, cat(cycles, " cycles over ", runs,
                                              " runs (start phases 1..5 each used ",
                                              per_start[1], "/", per_start[2], "/", per_start[3],
                                              "/", per_start[4], "/", per_start[5], " times)"));
  o.require(violations == 0, cat("co-executions within distance 2 = ", violations));
  o.require(incoherent == 0, cat("incoherent cycle boundaries after the first Phase 1 = ", incoherent));
  o.require(unconverged == 0, cat("runs not converged to a legitimate configuration = ", unconverged));
  return o;
}

Outcome criterion6() {
  Outcome o;
  std::int64_t sampled = 0, mismatches = 0, length_mismatch = 0, over_bound = 0, runs = 0;
  for (int run = 0; sampled < 100; ++run) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(run) + 5000);
    const int n = std::uniform_int_distribution<int>(10, 30)(rng);
    const Graph g = run % 2 == 0 ? generate({GraphKind::kGnp, n, 0.12, static_cast<std::uint64_t>(run), true})
                                 : generate({GraphKind::kTree, n, 0.0, static_cast<std::uint64_t>(run)});
    const auto alg = parse_algorithm(kSelectors[run % 5]);
    TrParams p;
    p.seed = static_cast<std::uint64_t>(run);
    const TransformResult r = run_transformed(*alg, g, random_configuration(*alg, g, rng), p);
    ++runs;
    for (const CycleRecord& c : r.trace.cycles) {
      if (!c.metrics.has_phase1 || c.metrics.executed.size() < 2 || sampled >= 100) continue;
      ++sampled;
      if (serialization_witness(*alg, g, c) != WitnessOutcome::kEquivalent) ++mismatches;
    }
    const Trace serial = equivalent_serial_trace(*alg, g, r.trace.cycles);
    if (serial.move_count() != r.metrics.moves || replay(serial) != r.trace.final_config) ++length_mismatch;
    if (r.metrics.moves > analytic_move_bound(*alg, g)) ++over_bound;
  }
  o.require(mismatches == 0, cat("serialization witness on ", sampled,
                                 " multi-executor cycles, mismatches = ", mismatches));
  o.require(length_mismatch == 0,
            cat("transformer moves equal the serial trace length over ", runs,
                " runs, mismatches = ", length_mismatch));
  o.require(over_bound == 0, cat("runs above the analytic move bound = ", over_bound));
  return o;
}

Outcome criterion7() {
  Outcome o;
  const Graph k10 = generate({GraphKind::kComplete, 10});
  const double all = winner_probability_estimate(k10, std::vector<bool>(10, true), 2, 10'000, 7);
  const double lower = 1.0 - std::exp(-1.0 / std::exp(0.5));
  o.require(all >= 0.45, cat("K10, all enabled, K=2: frequency ", std::fixed, std::setprecision(4),
                             all, " >= 0.45 (lower bound ", lower, ")"));
  std::vector<bool> one(10, false);
  one[0] = true;
  const double single = winner_probability_estimate(k10, one, 2, 10'000, 7);
  o.require(single == 1.0, cat("K10, one enabled: frequency ", std::fixed, std::setprecision(4),
                               single, " == 1.0"));
  return o;
}

Outcome criterion8() {
  Outcome o;
  int drop_pass = 0, corrupt_pass = 0;
  constexpr int kTrials = 50;
  for (int trial = 0; trial < kTrials; ++trial) {
    std::mt19937_64 rng(static_cast<std::uint64_t>(trial) + 9000);
    const Graph g = mixed_topology(trial, rng);
    const auto alg = parse_algorithm(kSelectors[trial % 5]);
    TrParams p;
    p.seed = static_cast<std::uint64_t>(trial);
    const Configuration init = random_configuration(*alg, g, rng);

    {
      Simulator sim(*alg, g, init, p);
      bool ok = sim.run_until_silent(10'000);
      const std::int64_t post = sim.rounds();
      FaultPlan plan;
      plan.faults.emplace_back(DropAllMessages{post + 1, post + 10});
      sim.set_fault_plan(plan);
      while (sim.rounds() <= post + 11) {
        sim.step();
        ok = ok && alg->legitimate(g, sim.projected());
      }
      if (ok) ++drop_pass;
    }
    {
      Simulator sim(*alg, g, init, p);
      bool ok = sim.run_until_silent(10'000);
      const std::int64_t before = sim.metrics().moves;
      std::vector<ProcessId> victims{std::uniform_int_distribution<ProcessId>(0, g.size() - 1)(rng)};
      if (trial % 2 == 0 && g.size() > 1) {
        ProcessId other = victims.front();
        while (other == victims.front()) other = std::uniform_int_distribution<ProcessId>(0, g.size() - 1)(rng);
        victims.push_back(other);
      }
      FaultPlan plan;
      plan.faults.emplace_back(CorruptState{victims, sim.cycle_index()});
      sim.set_fault_plan(plan);
      ok = ok && sim.run_until_silent(10'000);
      ok = ok && alg->legitimate(g, sim.projected());
      ok = ok && sim.metrics().moves - before <= analytic_move_bound(*alg, g);
      if (ok) ++corrupt_pass;
    }
  }
  o.require(drop_pass == kTrials, cat("all messages dropped for 10 rounds after convergence: ",
                                      drop_pass, "/", kTrials, " stay legitimate every round"));
  o.require(corrupt_pass == kTrials, cat("state of 1-2 processes corrupted: ", corrupt_pass, "/",
                                         kTrials, " re-converge within the move bound"));
  return o;
}

Outcome criterion9() {
  Outcome o;
  constexpr int kSeeds = 100;
  const std::vector<std::string> topologies{"path:20", "cycle:20", "star:20", "complete:12",
                                            "tree:20", "gnp:20:0.2"};
  for (const auto& topo : topologies) {
    double cycles = 0, moves = 0, bcasts = 0, reference = 0;
    for (const char* selector : {"mmat11", "mkdom11:k=1", "mkdep11:k=0"}) {
      const auto alg = parse_algorithm(selector);
      for (int s = 0; s < kSeeds; ++s) {
        const auto seed = static_cast<std::uint64_t>(s);
        GraphRecipe recipe = parse_recipe(topo);
        recipe.seed = seed;
        if (recipe.kind == GraphKind::kGnp) recipe.require_connected = true;
        const Graph g = generate(recipe);
        std::mt19937_64 rng(seed + 77);
        TrParams p;
        p.seed = seed;
        const TransformResult r = run_transformed(*alg, g, random_configuration(*alg, g, rng), p);
        cycles += static_cast<double>(r.metrics.cycles);
        moves += static_cast<double>(r.metrics.moves);
        bcasts += static_cast<double>(r.metrics.bcasts);
        reference += 5.0 * g.size() * static_cast<double>(r.metrics.cycles);
      }
    }
    const double runs = 3.0 * kSeeds;
    const double mean_cycles = cycles / runs;
    const double mean_moves = moves / runs;
    o.require(mean_cycles <= mean_moves / 0.40,
              cat(topo, ": mean cycles ", std::fixed, std::setprecision(2), mean_cycles,
                  " <= mean moves ", mean_moves, " / 0.40 = ", mean_moves / 0.40,
                  "; mean bcasts ", bcasts / runs, " vs 5n*cycles ", reference / runs));
  }
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  bool verbose = true;
  app.add_option("--criterion", only, "run a single criterion (1-9)")->check(CLI::Range(1, 9));
  app.add_flag("!--quiet", verbose, "print only the verdict lines");
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::pair<std::string, Outcome (*)()>> criteria{
      {"exhaustive closure", criterion1},
      {"exhaustive convergence and move bounds", criterion2},
      {"randomized trace invariants", criterion3},
      {"oracle agreement", criterion4},
      {"transformer exclusion and coherency", criterion5},
      {"serializability", criterion6},
      {"winner probability", criterion7},
      {"fault resilience", criterion8},
      {"overhead accounting", criterion9},
  };

  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (only != 0 && only != id) continue;
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = criteria[k].second();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    all = all && o.pass;
    std::cout << "criterion " << id << ": " << (o.pass ? "PASS" : "FAIL") << "  "
              << criteria[k].first << " (" << std::fixed << std::setprecision(2) << secs << " s)\n";
    if (verbose) {
      for (const auto& note : o.notes) std::cout << "    " << note << '\n';
    }
  }
  return all ? 0 : 1;
}
