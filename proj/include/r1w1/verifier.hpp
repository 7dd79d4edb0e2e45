#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "r1w1/engine.hpp"
#include "r1w1/model.hpp"

namespace r1w1 {

// Brute-force oracles, independent of any algorithm's variables.

/// True iff `matching` ⊆ E is a matching to which no edge of E can be added.
bool oracle_maximal_matching(const Graph& g, const std::vector<Edge>& matching);

/// Domination of V \ S, then minimality by removing each member in turn.
bool oracle_minimal_k_dominating(const Graph& g, const std::vector<bool>& in_set, int k);

/// Same question answered over every proper subset of S (|V| <= 20).
bool oracle_minimal_k_dominating_exhaustive(const Graph& g, const std::vector<bool>& in_set, int k);

/// Dependency on S, then maximality by adding each non-member in turn.
bool oracle_maximal_k_dependent(const Graph& g, const std::vector<bool>& in_set, int k);

/// Same question answered over every proper superset of S (|V| <= 20).
bool oracle_maximal_k_dependent_exhaustive(const Graph& g, const std::vector<bool>& in_set, int k);

/// Applies the oracle matching the algorithm's problem to the set derived
/// from `cfg`. Algorithms without a problem oracle are accepted.
bool oracle_accepts(const Algorithm& alg, const Graph& g, const Configuration& cfg);

class StateSpaceTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultStateCap = 10'000'000;

/// Mixed-radix indexing of every configuration over the declared domains.
class ConfigSpace {
 public:
  ConfigSpace(const Algorithm& alg, const Graph& g, std::uint64_t cap = kDefaultStateCap);

  std::uint64_t size() const { return size_; }
  Configuration decode(std::uint64_t code) const;
  std::uint64_t encode(const Configuration& cfg) const;

 private:
  std::vector<std::vector<Record>> domains_;
  std::vector<std::uint64_t> strides_;
  std::uint64_t size_ = 1;
};

/// Visits every configuration exactly once, in code order.
template <typename Visitor>
void enumerate_configs(const Algorithm& alg, const Graph& g, Visitor&& visit,
                       std::uint64_t cap = kDefaultStateCap) {
  const ConfigSpace space(alg, g, cap);
  for (std::uint64_t code = 0; code < space.size(); ++code) visit(space.decode(code));
}

struct ClosureResult {
  bool pass = true;
  std::uint64_t explored = 0;
  std::uint64_t legitimate = 0;
  std::uint64_t oracle_failures = 0;  // silent configurations the oracle rejects
  std::optional<Configuration> counterexample;
  std::string detail;
};

/// legitimate(cfg) ⇔ silent(cfg) for every configuration, and every silent
/// configuration passes the problem oracle.
ClosureResult verify_closure(const Algorithm& alg, const Graph& g,
                             std::uint64_t cap = kDefaultStateCap);

struct ConvergenceResult {
  bool pass = true;
  std::uint64_t explored = 0;
  std::uint64_t transitions = 0;
  std::int64_t worst_moves = 0;
  std::int64_t bound = 0;
  std::uint64_t terminals = 0;
  std::uint64_t oracle_failures = 0;
  /// On failure: the offending path (cycle or illegitimate dead end). On
  /// success: one longest path.
  std::vector<Configuration> path;
  std::string detail;
};

/// Explores every daemon, rule and witness choice from every configuration.
/// Passes iff the move relation is acyclic, every terminal configuration is
/// legitimate and oracle-approved, and the longest path is within `bound`.
ConvergenceResult verify_convergence(const Algorithm& alg, const Graph& g, std::int64_t bound,
                                     std::uint64_t cap = kDefaultStateCap);

struct VerificationReport {
  std::string graph;
  std::string algorithm;
  std::uint64_t configs = 0;
  ClosureResult closure;
  ConvergenceResult convergence;
  std::int64_t worst_moves = 0;
  std::int64_t analytic_bound = 0;

  bool pass() const { return closure.pass && convergence.pass; }
};

VerificationReport verify(const Algorithm& alg, const Graph& g,
                          std::uint64_t cap = kDefaultStateCap);

}  // namespace r1w1
