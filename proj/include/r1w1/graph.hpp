#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace r1w1 {

/// Dense process index; P_i is index i.
using ProcessId = std::int32_t;

/// The "no process" value (the bottom symbol of pointer variables).
inline constexpr ProcessId kNoProcess = -1;

using Edge = std::pair<ProcessId, ProcessId>;

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Immutable undirected simple graph over processes 0..n-1.
///
/// Neighbor lists are sorted ascending, which the algorithms rely on for
/// lowest-id tie-breaking. One-hop, exact two-hop and within-two-hop sets are
/// computed once at construction.
class Graph {
 public:
  Graph() = default;

  /// Throws GraphError on an out-of-range endpoint or a self-loop. Duplicate
  /// edges (in either orientation) collapse to one.
  static Graph build(int n, std::span<const Edge> edges);

  int size() const { return static_cast<int>(adjacency_.size()); }
  std::size_t edge_count() const { return edge_count_; }

  std::span<const ProcessId> neighbors(ProcessId i) const;
  int degree(ProcessId i) const { return static_cast<int>(neighbors(i).size()); }
  bool adjacent(ProcessId i, ProcessId j) const;

  /// { j | dist(i, j) = 2 }
  std::span<const ProcessId> two_hop_exact(ProcessId i) const;
  /// N(i) ∪ two_hop_exact(i), sorted, without i.
  std::span<const ProcessId> within_two(ProcessId i) const;

  /// Edges as (low, high) pairs in lexicographic order.
  std::vector<Edge> edges() const;
  int max_degree() const;
  bool connected() const;

  /// BFS hop distances from `source`; unreachable processes get -1.
  std::vector<int> distances_from(ProcessId source) const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.adjacency_ == b.adjacency_;
  }

 private:
  void check_id(ProcessId i) const;

  std::vector<std::vector<ProcessId>> adjacency_;
  std::vector<std::vector<ProcessId>> two_hop_;
  std::vector<std::vector<ProcessId>> within_two_;
  std::size_t edge_count_ = 0;
};

enum class GraphKind { kPath, kCycle, kStar, kComplete, kTree, kGnp };

/// Parameters for the deterministic generators. `probability` is used by
/// kGnp only; `seed` by kTree and kGnp.
struct GraphRecipe {
  GraphKind kind = GraphKind::kPath;
  int n = 0;
  double probability = 0.0;
  std::uint64_t seed = 0;
  bool require_connected = false;
  int max_attempts = 1000;
};

Graph generate(const GraphRecipe& recipe);

/// Parses a generator descriptor such as "cycle:8", "star:5", "tree:12:seed=3"
/// or "gnp:20:0.2:seed=7[:connected]".
GraphRecipe parse_recipe(const std::string& descriptor);

/// Every connected simple graph on n vertices, one representative per
/// isomorphism class (n <= 6).
std::vector<Graph> all_connected_graphs(int n);

std::string describe(const Graph& g);

}  // namespace r1w1
