#pragma once

// Synchronous message-passing execution of an atomic-state algorithm.
//
// Every node keeps its own record x, a cache C of each neighbor's record,
// and voting state. Rounds are grouped into five-phase cycles:
//   1. broadcast x, refresh caches, evaluate guards, draw a vote if enabled
//   2. broadcast votes; pick the unique maximum as winner candidate
//   3. broadcast winner candidates; a node named by every neighbor executes
//   4. executors broadcast x and their cache; neighbors adopt written values
//   5. nodes whose x was written broadcast it to their own neighbors
// Within a round all sends are computed before any receive is applied.

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <variant>
#include <vector>

#include "r1w1/engine.hpp"
#include "r1w1/model.hpp"

namespace r1w1 {

struct DropAllMessages {
  std::int64_t first_round = 0;
  std::int64_t last_round = 0;  // inclusive
};

struct DropRandomMessages {
  double probability = 0.0;
  std::int64_t first_round = 0;
  std::int64_t last_round = 0;  // inclusive
};

/// Overwrites x and C of `ids` with random domain-valid values when cycle
/// `at_cycle` opens.
struct CorruptState {
  std::vector<ProcessId> ids;
  std::int64_t at_cycle = 0;
};

using Fault = std::variant<DropAllMessages, DropRandomMessages, CorruptState>;

struct FaultPlan {
  std::vector<Fault> faults;
  bool empty() const { return faults.empty(); }
};

enum class CacheInit { kCoherent, kRandom };

struct TrParams {
  int K = 2;
  std::optional<int> n_prime;  // defaults to n
  std::uint64_t seed = 0;
  int start_phase = 1;
  std::int64_t max_cycles = 100'000;
  CacheInit cache_init = CacheInit::kRandom;
  /// Draw g, r, w and the per-cycle flags at random instead of quiet defaults.
  bool scramble_runtime = false;
  FaultPlan faults;
};

/// Vote range R = K · n'. Throws std::invalid_argument on K < 2 or n' < n.
std::int64_t vote_range(const TrParams& params, int n);
void validate(const TrParams& params, int n);

struct StatePayload {
  Record x;
};
struct VotePayload {
  std::int64_t r = 0;
};
struct WinnerPayload {
  ProcessId w = kNoProcess;
};
struct UpdatePayload {
  Record x;
  std::vector<Write> cache;  // sender's C, one entry per sender neighbor
};

struct Message {
  ProcessId sender = kNoProcess;
  std::variant<StatePayload, VotePayload, WinnerPayload, UpdatePayload> payload;
};

struct Vote {
  ProcessId sender = kNoProcess;
  std::int64_t value = 0;
};

/// Sender of the strictly unique maximum among `received`, also competing
/// against `own_vote` (the node's own vote when it is enabled). kNoProcess
/// on a tie, on an empty comparison, or when the node's own vote wins.
ProcessId winner_candidate(ProcessId self, std::optional<std::int64_t> own_vote,
                           std::span<const Vote> received);

struct WinnerNotice {
  ProcessId sender = kNoProcess;
  ProcessId named = kNoProcess;
};

/// g ∧ a notice arrived from every neighbor ∧ every notice names `self`.
bool execution_condition(ProcessId self, bool enabled, std::span<const ProcessId> neighbors,
                         std::span<const WinnerNotice> received);

struct NodeRuntime {
  Record x;
  std::vector<Record> cache;  // aligned with Graph::neighbors(i)
  std::int64_t r = 1;
  bool g = false;
  ProcessId w = kNoProcess;
  bool executed = false;
  bool modified = false;
  std::vector<Message> inbox;  // messages received in the last round
};

struct CycleMetrics {
  std::int64_t cycle = 0;
  std::vector<ProcessId> executed;
  std::int64_t bcasts = 0;
  bool coherent = false;       // at the end of the cycle
  std::int64_t enabled = 0;    // |H(t)| after Phase 1
  bool has_phase1 = false;     // false only for a partial first cycle
};

struct CycleRecord {
  CycleMetrics metrics;
  Configuration pre;    // projected configuration when the cycle opened
  Configuration post;   // projected configuration when the cycle closed
  std::vector<MoveRecord> moves;
};

struct RunMetrics {
  std::int64_t cycles = 0;
  std::int64_t rounds = 0;
  std::int64_t bcasts = 0;
  std::int64_t moves = 0;
  bool converged = false;
  std::int64_t exclusion_violations = 0;
  std::int64_t incoherent_boundaries = 0;
  std::vector<CycleMetrics> per_cycle;
};

class Simulator {
 public:
  /// `alg` and `g` must outlive the simulator.
  Simulator(const Algorithm& alg, const Graph& g, const Configuration& initial, TrParams params);

  /// Phase (1..5) of the next round.
  int phase() const;
  std::int64_t rounds() const { return round_; }
  /// Index of the cycle the next round belongs to.
  std::int64_t cycle_index() const { return static_cast<std::int64_t>(history_.size()); }

  /// One synchronous round.
  void step();
  /// Rounds until the current cycle closes (after Phase 5).
  void finish_cycle();
  /// Whole cycles until one with a completed Phase 1 observes no enabled
  /// node, or `max_cycles` more cycles have run. Returns true on silence.
  bool run_until_silent(std::int64_t max_cycles);

  Configuration projected() const;
  bool cache_coherent() const;
  bool converged() const { return converged_; }

  const NodeRuntime& node(ProcessId i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  /// Direct access for fault experiments and tests.
  NodeRuntime& mutable_node(ProcessId i) { return nodes_.at(static_cast<std::size_t>(i)); }

  void set_fault_plan(FaultPlan plan) { params_.faults = std::move(plan); }
  /// Immediately overwrites x and C of `ids` with random domain values.
  void corrupt(std::span<const ProcessId> ids);

  const std::vector<CycleRecord>& history() const { return history_; }
  RunMetrics metrics() const;
  const Graph& graph() const { return *graph_; }
  const Algorithm& algorithm() const { return *alg_; }

 private:
  std::optional<Message> compose(ProcessId i, int phase) const;
  bool dropped(std::int64_t round, ProcessId from, ProcessId to);
  void receive(ProcessId i, int phase);
  void execute_command(ProcessId i);
  NeighborhoodView cached_view(ProcessId i) const;
  std::size_t slot(ProcessId i, ProcessId j) const;
  void open_cycle();
  void close_cycle();

  const Algorithm* alg_;
  const Graph* graph_;
  TrParams params_;
  std::int64_t vote_range_;
  std::vector<NodeRuntime> nodes_;
  std::vector<std::mt19937_64> node_rngs_;
  std::mt19937_64 fault_rng_;
  std::int64_t round_ = 0;
  bool cycle_open_ = false;
  bool converged_ = false;
  CycleRecord current_;
  std::vector<CycleRecord> history_;
};

struct TransformedTrace {
  Configuration initial;
  std::vector<CycleRecord> cycles;
  Configuration final_config;
};

struct TransformResult {
  TransformedTrace trace;
  RunMetrics metrics;
};

TransformResult run_transformed(const Algorithm& alg, const Graph& g, const Configuration& initial,
                                const TrParams& params);

/// Pairwise hop distance ≥ 3 within `executed`.
bool check_exclusion(const Graph& g, std::span<const ProcessId> executed);

enum class WitnessOutcome { kEquivalent, kMismatch, kNotApplicable };

/// Replays the cycle's moves through the atomic-state engine in every order
/// from the cycle's pre configuration; equivalent iff all orders agree with
/// each other and with the simulator's post configuration.
WitnessOutcome serialization_witness(const Algorithm& alg, const Graph& g,
                                     const CycleRecord& cycle);

/// Concatenates the moves of every cycle with a completed Phase 1 into an
/// atomic-state trace from the first such cycle's pre configuration.
Trace equivalent_serial_trace(const Algorithm& alg, const Graph& g,
                              const std::vector<CycleRecord>& cycles);

/// Monte Carlo estimate of P(at least one node executes) for one voting
/// round (Phases 2-3) with the given enabled set.
double winner_probability_estimate(const Graph& g, const std::vector<bool>& enabled, int K,
                                   std::int64_t trials, std::uint64_t seed,
                                   std::optional<int> n_prime = std::nullopt);

/// Deterministic per-node seed derived from the global seed.
std::uint64_t node_seed(std::uint64_t seed, ProcessId i);

}  // namespace r1w1
