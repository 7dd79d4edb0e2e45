#include <vector>

#include "doctest.h"
#include "r1w1/algorithms.hpp"
#include "r1w1/engine.hpp"

using namespace r1w1;

namespace {

constexpr ProcessId kBot = kNoProcess;

Configuration qs(std::vector<ProcessId> q) {
  std::vector<Record> r;
  for (ProcessId v : q) r.push_back(matching::with_q(v));
  return Configuration(std::move(r));
}

Configuration xc(std::vector<Value> x, std::vector<Value> c) {
  std::vector<Record> r;
  for (std::size_t i = 0; i < x.size(); ++i) r.push_back(counting::make(x[i], c[i]));
  return Configuration(std::move(r));
}

const Graph& p3() {
  static const Graph g = generate({GraphKind::kPath, 3});
  return g;
}

}  // namespace

TEST_CASE("enabled_rules: free neighbor and nobody pointing") {
  const auto alg = make_mmat11();
  CHECK(enabled_rules(*alg, p3(), qs({kBot, kBot, kBot}), 1) == std::vector<RuleId>{2});
}

TEST_CASE("enabled_rules: both neighbors point at a free middle process") {
  // Rule 2 needs a neighbor with q = ⊥; here both neighbors point at P1, so
  // only Rule 1 holds.
  const auto alg = make_mmat11();
  CHECK(enabled_rules(*alg, p3(), qs({1, kBot, 1}), 1) == std::vector<RuleId>{1});
}

TEST_CASE("enabled_rules: nothing enabled in a legitimate configuration") {
  const auto alg = make_mmat11();
  const Configuration cfg = qs({1, 0, kBot});
  REQUIRE(alg->legitimate(p3(), cfg));
  for (ProcessId i = 0; i < 3; ++i) CHECK(enabled_rules(*alg, p3(), cfg, i).empty());
}

TEST_CASE("apply_move: Rule 2 pairs with the lowest free neighbor") {
  const auto alg = make_mmat11();
  const AppliedMove m = apply_move(*alg, p3(), qs({kBot, kBot, kBot}), 0, 2);
  CHECK(m.next == qs({1, 0, kBot}));
  CHECK(m.record.mover == 0);
  CHECK(m.record.rule == 2);
  CHECK(m.record.witness == 1);
  REQUIRE(m.record.writes.size() == 2);
  CHECK(m.record.writes[0].target == 0);
  CHECK(m.record.writes[1].target == 1);
}

TEST_CASE("apply_move: explicit witness must satisfy the rule") {
  const auto alg = make_mmat11();
  const Configuration cfg = qs({kBot, kBot, kBot});
  const AppliedMove m = apply_move(*alg, p3(), cfg, 1, 2, 2);
  CHECK(m.next == qs({kBot, 2, 1}));
  CHECK_THROWS_AS(apply_move(*alg, p3(), cfg, 1, 2, 1), ContractError);
}

TEST_CASE("apply_move: counter fix writes only c_i") {
  const auto alg = make_mkdom11(1);
  const Configuration cfg = xc({1, 0, 1}, {0, 0, 0});
  const AppliedMove m = apply_move(*alg, p3(), cfg, 1, 1);
  REQUIRE(m.record.writes.size() == 1);
  CHECK(m.record.writes[0].target == 1);
  CHECK(m.next == xc({1, 0, 1}, {0, 2, 0}));
}

TEST_CASE("apply_move: disabled rule is a contract violation") {
  const auto alg = make_mmat11();
  CHECK_THROWS_AS(apply_move(*alg, p3(), qs({1, 0, kBot}), 2, 2), ContractError);
  CHECK_THROWS_AS(apply_move(*alg, p3(), qs({kBot, kBot, kBot}), 0, 9), ContractError);
}

TEST_CASE("execute: scripted matching run on a path") {
  const auto alg = make_mmat11();
  const Trace t = execute(*alg, p3(), qs({kBot, kBot, kBot}), Scripted{{0}});
  CHECK(t.silent);
  CHECK(t.move_count() == 1);
  CHECK(t.final_config == qs({1, 0, kBot}));
  CHECK(t.counters[0][2] == 1);
  CHECK(t.rule_total(2) == 1);
}

TEST_CASE("execute: k-dependence on a triangle") {
  const auto alg = make_mkdep11(0);
  const Graph k3 = generate({GraphKind::kComplete, 3});
  const Trace t = execute(*alg, k3, xc({0, 0, 0}, {0, 0, 0}), Scripted{{0}});
  CHECK(t.silent);
  CHECK(t.move_count() == 1);
  CHECK(member_set(t.final_config) == std::vector<bool>{true, false, false});
  CHECK(t.final_config == xc({1, 0, 0}, {0, 1, 1}));
}

TEST_CASE("execute: legitimate start takes no moves") {
  const auto mm = make_mmat11();
  const Trace a = execute(*mm, p3(), qs({1, 0, kBot}), SeededRandom{1});
  CHECK(a.silent);
  CHECK(a.move_count() == 0);
  const auto dom = make_mkdom11(1);
  const Graph c4 = generate({GraphKind::kCycle, 4});
  const Trace b = execute(*dom, c4, xc({0, 1, 0, 1}, {2, 0, 2, 0}), SeededRandom{1});
  CHECK(b.silent);
  CHECK(b.move_count() == 0);
}

TEST_CASE("execute: budget exhaustion is reported") {
  const auto alg = make_mmat11();
  ExecuteOptions opts;
  opts.max_moves = 0;
  const Trace t = execute(*alg, p3(), qs({kBot, kBot, kBot}), SeededRandom{1}, opts);
  CHECK(t.budget_exhausted);
  CHECK_FALSE(t.silent);
  CHECK(t.move_count() == 0);
}

TEST_CASE("is_silent") {
  const auto alg = make_mmat11();
  CHECK(is_silent(*alg, p3(), qs({1, 0, kBot})));
  CHECK_FALSE(is_silent(*alg, p3(), qs({kBot, kBot, kBot})));
  const Graph single = Graph::build(1, {});
  CHECK(is_silent(*alg, single, qs({kBot})));
  CHECK(alg->legitimate(single, qs({kBot})));
}

TEST_CASE("daemon: scripted skips disabled ids and falls back") {
  const auto alg = make_mmat11();
  Daemon d(Scripted{{2, 0}});
  const std::vector<ProcessId> enabled{0, 1};
  CHECK(d.select(enabled, *alg, p3(), qs({kBot, kBot, kBot})) == 0);
  CHECK(d.select(enabled, *alg, p3(), qs({kBot, kBot, kBot})) == 0);
}

TEST_CASE("daemon: seeded random is deterministic") {
  const auto alg = make_mmat11();
  const Graph g = generate({GraphKind::kPath, 8});
  const Configuration cfg = make_initial(*alg, g, "all-bottom");
  const std::vector<ProcessId> enabled = enabled_processes(*alg, g, cfg);
  Daemon a(SeededRandom{7});
  Daemon b(SeededRandom{7});
  for (int k = 0; k < 20; ++k) CHECK(a.select(enabled, *alg, g, cfg) == b.select(enabled, *alg, g, cfg));
}

TEST_CASE("daemon: round robin follows the last mover cyclically") {
  const auto alg = make_mmat11();
  Daemon d(RoundRobinEnabled{});
  d.record_move(1);
  const std::vector<ProcessId> enabled{0, 3};
  CHECK(d.select(enabled, *alg, p3(), qs({kBot, kBot, kBot})) == 3);
  d.record_move(3);
  CHECK(d.select(enabled, *alg, p3(), qs({kBot, kBot, kBot})) == 0);
}

TEST_CASE("daemon: empty enabled set is an error") {
  const auto alg = make_mmat11();
  Daemon d(SeededRandom{1});
  CHECK_THROWS_AS(d.select({}, *alg, p3(), qs({1, 0, kBot})), ContractError);
}

TEST_CASE("daemon: greedy reaches a legitimate configuration") {
  for (const char* selector : {"mmat11", "mkdom11:k=1", "mkdep11:k=1"}) {
    const auto alg = parse_algorithm(selector);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      const Graph g = generate({GraphKind::kGnp, 12, 0.3, seed});
      const Trace t = execute(*alg, g, make_initial(*alg, g, "random:" + std::to_string(seed)),
                              GreedyAdversarial{});
      CHECK(t.silent);
      CHECK(alg->legitimate(g, t.final_config));
    }
  }
}

TEST_CASE("replay reproduces the final configuration") {
  for (const char* selector : {"mmat11", "mkdom11:k=2", "mkdep11:k=0"}) {
    const auto alg = parse_algorithm(selector);
    for (std::uint64_t seed = 0; seed < 25; ++seed) {
      const Graph g = generate({GraphKind::kGnp, 20, 0.25, seed});
      const Configuration init = make_initial(*alg, g, "random:" + std::to_string(seed));
      ExecuteOptions opts;
      opts.witness = WitnessPolicy::kSeededRandom;
      opts.witness_seed = seed;
      const Trace a = execute(*alg, g, init, SeededRandom{seed}, opts);
      const Trace b = execute(*alg, g, init, SeededRandom{seed}, opts);
      CHECK(replay(a) == a.final_config);
      CHECK(a.final_config == b.final_config);
      CHECK(a.move_count() == b.move_count());
    }
  }
}

TEST_CASE("execute rejects out-of-domain initial configurations") {
  const auto alg = make_mmat11();
  CHECK_THROWS_AS(execute(*alg, p3(), qs({2, kBot, kBot}), SeededRandom{0}), ContractError);
}
