#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "r1w1/model.hpp"

namespace r1w1 {

struct MoveRecord {
  std::size_t step = 0;
  ProcessId mover = kNoProcess;
  RuleId rule = 0;
  ProcessId witness = kNoProcess;  // existential binding, if the rule has one
  WriteSet writes;

  friend bool operator==(const MoveRecord&, const MoveRecord&) = default;
};

struct AppliedMove {
  Configuration next;
  MoveRecord record;
};

/// Rules whose guard holds at i, ascending.
std::vector<RuleId> enabled_rules(const Algorithm& alg, const Graph& g, const Configuration& cfg,
                                  ProcessId i);
bool is_enabled(const Algorithm& alg, const Graph& g, const Configuration& cfg, ProcessId i);
std::vector<ProcessId> enabled_processes(const Algorithm& alg, const Graph& g,
                                         const Configuration& cfg);
bool is_silent(const Algorithm& alg, const Graph& g, const Configuration& cfg);

/// Applies `rule` at i. With `witness` unset the lowest-id satisfying
/// neighbor is bound. Throws ContractError if the rule is disabled, the
/// witness does not satisfy the quantifier, or the command writes outside
/// {i} ∪ N(i) or outside the variable domains.
AppliedMove apply_move(const Algorithm& alg, const Graph& g, const Configuration& cfg,
                       ProcessId i, RuleId rule, std::optional<ProcessId> witness = std::nullopt);

/// Applies an already-recorded move (used for replay).
Configuration apply_writes(const Configuration& cfg, const WriteSet& writes);

struct SeededRandom {
  std::uint64_t seed = 0;
};
struct RoundRobinEnabled {};
struct GreedyAdversarial {};
struct Scripted {
  std::vector<ProcessId> order;
};

using DaemonPolicy = std::variant<SeededRandom, RoundRobinEnabled, GreedyAdversarial, Scripted>;

/// Stateful central scheduler built from a DaemonPolicy.
class Daemon {
 public:
  explicit Daemon(DaemonPolicy policy);

  /// Picks one member of `enabled` (non-empty, ascending). The greedy policy
  /// consults the algorithm through `alg`, `g` and `cfg`.
  ProcessId select(std::span<const ProcessId> enabled, const Algorithm& alg, const Graph& g,
                   const Configuration& cfg);

  /// Reports the mover chosen for the last step.
  void record_move(ProcessId mover) { last_mover_ = mover; }

 private:
  ProcessId select_greedy(std::span<const ProcessId> enabled, const Algorithm& alg,
                          const Graph& g, const Configuration& cfg) const;

  DaemonPolicy policy_;
  std::mt19937_64 rng_;
  std::size_t script_pos_ = 0;
  ProcessId last_mover_ = kNoProcess;
};

enum class WitnessPolicy { kLowestId, kSeededRandom };

struct ExecuteOptions {
  /// Unset means the default budget 10·n + 100.
  std::optional<std::int64_t> max_moves;
  WitnessPolicy witness = WitnessPolicy::kLowestId;
  std::uint64_t witness_seed = 0;
};

struct Trace {
  Configuration initial;
  std::vector<MoveRecord> moves;
  Configuration final_config;
  /// counters[i][r] = moves of process i by rule r (index 0 unused).
  std::vector<std::vector<std::int64_t>> counters;
  bool silent = false;
  bool budget_exhausted = false;

  std::int64_t move_count() const { return static_cast<std::int64_t>(moves.size()); }
  std::int64_t rule_total(RuleId rule) const;
};

std::int64_t default_move_budget(const Graph& g);

/// Runs the central-daemon execution until silence or budget exhaustion.
/// The selected process always executes its lowest-numbered enabled rule.
Trace execute(const Algorithm& alg, const Graph& g, const Configuration& initial,
              const DaemonPolicy& daemon, const ExecuteOptions& options = {});

/// Re-applies the recorded write sets from `trace.initial`.
Configuration replay(const Trace& trace);

}  // namespace r1w1
