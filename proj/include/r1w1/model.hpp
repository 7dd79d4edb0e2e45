#pragma once

// Core vocabulary of the atomic-state model: per-process records,
// configurations, closed-neighborhood views, write sets, and the guarded
// command interface every algorithm implements.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "r1w1/graph.hpp"

namespace r1w1 {

using RuleId = int;  // 1-based, in listing order
using Value = std::int32_t;

/// One process's variables. Algorithms use a prefix of `vars` and leave the
/// rest at zero, so records compare and hash uniformly.
struct Record {
  static constexpr std::size_t kMaxVars = 2;
  std::array<Value, kMaxVars> vars{};

  friend bool operator==(const Record&, const Record&) = default;
  friend auto operator<=>(const Record&, const Record&) = default;
};

class Configuration {
 public:
  Configuration() = default;
  explicit Configuration(std::vector<Record> records) : records_(std::move(records)) {}

  int size() const { return static_cast<int>(records_.size()); }
  const Record& operator[](ProcessId i) const { return records_.at(static_cast<std::size_t>(i)); }
  Record& operator[](ProcessId i) { return records_.at(static_cast<std::size_t>(i)); }
  const std::vector<Record>& records() const { return records_; }

  friend bool operator==(const Configuration&, const Configuration&) = default;

 private:
  std::vector<Record> records_;
};

class ContractError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Read-only closed-neighborhood snapshot handed to guards and commands.
/// Rule code never sees the global configuration.
class NeighborhoodView {
 public:
  /// `neighbor_states[k]` is the record of `g.neighbors(center)[k]`.
  NeighborhoodView(const Graph& g, ProcessId center, Record self,
                   std::vector<Record> neighbor_states);

  ProcessId center() const { return center_; }
  const Record& self() const { return self_; }
  std::span<const ProcessId> neighbors() const { return neighbors_; }
  std::span<const Record> neighbor_states() const { return neighbor_states_; }

  /// Record of a visible process; throws ContractError for anything outside
  /// {center} ∪ N(center).
  const Record& state(ProcessId j) const;
  /// |N_j| for a visible process (graph-constant knowledge).
  int degree(ProcessId j) const;
  bool visible(ProcessId j) const;

 private:
  const Graph* graph_;
  ProcessId center_;
  Record self_;
  std::span<const ProcessId> neighbors_;
  std::vector<Record> neighbor_states_;
};

NeighborhoodView view_of(const Graph& g, const Configuration& cfg, ProcessId i);

struct Write {
  ProcessId target = kNoProcess;
  Record value;
  friend bool operator==(const Write&, const Write&) = default;
};

/// New records for a subset of {i} ∪ N(i), ascending by target.
using WriteSet = std::vector<Write>;

enum class AlgorithmKind { kMaximalMatching, kMinimalKDomination, kMaximalKDependence, kOther };

/// A set of guarded commands over closed-neighborhood views plus the
/// predicate that characterizes its legitimate configurations.
class Algorithm {
 public:
  virtual ~Algorithm() = default;

  virtual std::string name() const = 0;
  virtual AlgorithmKind kind() const { return AlgorithmKind::kOther; }
  virtual std::vector<std::string> variable_names() const = 0;

  /// Every admissible record of process i, in a fixed order.
  virtual std::vector<Record> domain(const Graph& g, ProcessId i) const = 0;
  /// Maps an arbitrary record into the declared domain.
  virtual Record sanitize(const Graph& g, ProcessId i, Record r) const = 0;
  bool in_domain(const Graph& g, ProcessId i, const Record& r) const {
    return sanitize(g, i, r) == r;
  }

  virtual int rule_count() const = 0;
  virtual std::string rule_label(RuleId rule) const = 0;
  virtual bool guard(RuleId rule, const NeighborhoodView& view) const = 0;

  /// Neighbors that can bind the rule's existential quantifier, ascending.
  /// Empty for rules without one. Only meaningful when the guard holds.
  virtual std::vector<ProcessId> witnesses(RuleId, const NeighborhoodView&) const { return {}; }
  bool has_witness(RuleId rule, const NeighborhoodView& view) const {
    return !witnesses(rule, view).empty();
  }

  /// Executes the command. `witness` is kNoProcess for rules without an
  /// existential quantifier.
  virtual WriteSet command(RuleId rule, const NeighborhoodView& view, ProcessId witness) const = 0;

  virtual bool legitimate(const Graph& g, const Configuration& cfg) const = 0;

  /// Scalar that grows as the execution makes progress; used by the greedy
  /// adversarial daemon. Algorithms without one return nullopt.
  virtual std::optional<std::int64_t> progress(const Graph&, const Configuration&) const {
    return std::nullopt;
  }

  /// Worst-case move bound known for the algorithm, if any.
  virtual std::optional<std::int64_t> move_bound(const Graph&) const { return std::nullopt; }
};

/// Validates that every record lies in the algorithm's domain.
bool valid_configuration(const Algorithm& alg, const Graph& g, const Configuration& cfg);

/// Clamps every record into its domain.
Configuration sanitized(const Algorithm& alg, const Graph& g, Configuration cfg);

}  // namespace r1w1
