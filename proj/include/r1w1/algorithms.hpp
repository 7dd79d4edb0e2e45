#pragma once

#include <memory>
#include <string>
#include <vector>

#include "r1w1/engine.hpp"
#include "r1w1/model.hpp"

namespace r1w1 {

// Record layouts.
//   maximal matching:      vars[0] = q (a neighbor id, or kNoProcess for ⊥)
//   k-domination/-dependence: vars[0] = x ∈ {0,1}, vars[1] = c ∈ {0..|N_i|}
namespace matching {
inline ProcessId q(const Record& r) { return r.vars[0]; }
inline Record with_q(ProcessId q) { return Record{{q, 0}}; }
}  // namespace matching

namespace counting {
inline Value x(const Record& r) { return r.vars[0]; }
inline Value c(const Record& r) { return r.vars[1]; }
inline Record make(Value x, Value c) { return Record{{x, c}}; }
}  // namespace counting

/// Maximal matching in which a process may rewrite a neighbor's pointer.
std::unique_ptr<Algorithm> make_mmat11();

/// Minimal k-dominating set (k >= 1) with neighbor-maintained counters.
std::unique_ptr<Algorithm> make_mkdom11(int k);

/// Maximal k-dependent set (k >= 0) with neighbor-maintained counters.
std::unique_ptr<Algorithm> make_mkdep11(int k);

/// The matching algorithm with its give-up rule removed. Negative control
/// for the verifier; it has silent illegitimate configurations.
std::unique_ptr<Algorithm> make_broken_matching();

/// Parses "mmat11", "mkdom11:k=2", "mkdep11:k=0" or "broken-fixture".
std::unique_ptr<Algorithm> parse_algorithm(const std::string& selector);

/// Parameter k of a counting algorithm (0 for others).
int threshold_of(const Algorithm& alg);

/// |{ j ∈ N_i | x_j = 1 }| evaluated on a view.
int count_of(const NeighborhoodView& view);

/// { (i,j) ∈ E | q_i = j ∧ q_j = i }, i < j.
std::vector<Edge> matched_pairs(const Graph& g, const Configuration& cfg);

/// { i | x_i = 1 } as a membership vector.
std::vector<bool> member_set(const Configuration& cfg);

struct MatchingPotentials {
  std::int64_t matched = 0;    // A: matching pairs
  std::int64_t dangling = 0;   // B: q_i ∈ N_i but q_{q_i} ∉ {i, ⊥}
  friend bool operator==(const MatchingPotentials&, const MatchingPotentials&) = default;
};

MatchingPotentials mmat_potentials(const Graph& g, const Configuration& cfg);

/// Analytic move bound: ⌊n/2⌋ + n for the matching algorithm, 4n for the
/// counting algorithms.
std::int64_t analytic_move_bound(const Algorithm& alg, const Graph& g);

/// Per-trace check of the convergence invariants. Each field counts violations.
struct TraceAudit {
  // matching
  std::int64_t matched_decreased = 0;
  std::int64_t dangling_increased = 0;
  std::int64_t potentials_unchanged = 0;
  // counting algorithms
  std::int64_t fix_rule_repeated = 0;     // rule 1 taken more than once
  std::int64_t fix_rule_not_first = 0;    // rule 1 taken after another move
  std::int64_t rule2_over_twice = 0;
  std::int64_t rule3_over_once = 0;
  std::int64_t count_destabilized = 0;    // c_i = Count_i() held, then broke
  // all
  std::int64_t bound_exceeded = 0;
  std::int64_t replay_mismatch = 0;
  std::int64_t write_locality = 0;

  std::int64_t total() const;
  /// Violations excluding the dangling-pointer potential clause.
  std::int64_t total_without_dangling() const { return total() - dangling_increased; }
};

TraceAudit audit_trace(const Algorithm& alg, const Graph& g, const Trace& trace);

/// Named initial configurations: "all-bottom", "all-zero", "all-ones-correct-counters",
/// "all-ones-zero-counters", "max-counters", "pointer-cycle", "random:<seed>".
Configuration make_initial(const Algorithm& alg, const Graph& g, const std::string& preset);

/// Uniform draw over the declared per-process domains.
template <typename Rng>
Configuration random_configuration(const Algorithm& alg, const Graph& g, Rng& rng) {
  std::vector<Record> records;
  records.reserve(static_cast<std::size_t>(g.size()));
  for (ProcessId i = 0; i < g.size(); ++i) {
    const auto dom = alg.domain(g, i);
    std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
    records.push_back(dom[pick(rng)]);
  }
  return Configuration(std::move(records));
}

}  // namespace r1w1
