#include "r1w1/graph.hpp"

#include <algorithm>
#include <charconv>
#include <deque>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace r1w1 {

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  std::istringstream in(text);
  while (std::getline(in, current, sep)) parts.push_back(current);
  return parts;
}

template <typename T>
T parse_number(const std::string& text, const std::string& context) {
  T value{};
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw GraphError("invalid number '" + text + "' in " + context);
  }
  return value;
}

}  // namespace

Graph Graph::build(int n, std::span<const Edge> edges) {
  if (n < 0) throw GraphError("negative process count");
  Graph g;
  std::vector<std::set<ProcessId>> sets(static_cast<std::size_t>(n));
  for (const auto& [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n) {
      throw GraphError("edge (" + std::to_string(a) + "," + std::to_string(b) +
                       ") has an endpoint outside [0," + std::to_string(n) + ")");
    }
    if (a == b) {
      throw GraphError("self-loop (" + std::to_string(a) + "," + std::to_string(b) + ")");
    }
    sets[a].insert(b);
    sets[b].insert(a);
  }
  g.adjacency_.resize(sets.size());
  for (std::size_t i = 0; i < sets.size(); ++i) {
    g.adjacency_[i].assign(sets[i].begin(), sets[i].end());
    g.edge_count_ += sets[i].size();
  }
  g.edge_count_ /= 2;

  g.two_hop_.resize(sets.size());
  g.within_two_.resize(sets.size());
  for (ProcessId i = 0; i < n; ++i) {
    std::set<ProcessId> two;
    for (ProcessId j : g.adjacency_[i]) {
      for (ProcessId k : g.adjacency_[j]) {
        if (k != i && !sets[i].contains(k)) two.insert(k);
      }
    }
    g.two_hop_[i].assign(two.begin(), two.end());
    std::set<ProcessId> both(two);
    both.insert(g.adjacency_[i].begin(), g.adjacency_[i].end());
    g.within_two_[i].assign(both.begin(), both.end());
  }
  return g;
}

void Graph::check_id(ProcessId i) const {
  if (i < 0 || i >= size()) {
    throw GraphError("process id " + std::to_string(i) + " out of range");
  }
}

std::span<const ProcessId> Graph::neighbors(ProcessId i) const {
  check_id(i);
  return adjacency_[i];
}

bool Graph::adjacent(ProcessId i, ProcessId j) const {
  const auto n = neighbors(i);
  return std::binary_search(n.begin(), n.end(), j);
}

std::span<const ProcessId> Graph::two_hop_exact(ProcessId i) const {
  check_id(i);
  return two_hop_[i];
}

std::span<const ProcessId> Graph::within_two(ProcessId i) const {
  check_id(i);
  return within_two_[i];
}

std::vector<Edge> Graph::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count_);
  for (ProcessId i = 0; i < size(); ++i) {
    for (ProcessId j : adjacency_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

int Graph::max_degree() const {
  int best = 0;
  for (const auto& a : adjacency_) best = std::max(best, static_cast<int>(a.size()));
  return best;
}

std::vector<int> Graph::distances_from(ProcessId source) const {
  check_id(source);
  std::vector<int> dist(adjacency_.size(), -1);
  std::deque<ProcessId> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const ProcessId u = queue.front();
    queue.pop_front();
    for (ProcessId v : adjacency_[u]) {
      if (dist[v] < 0) {
        dist[v] = dist[u] + 1;
        queue.push_back(v);
      }
    }
  }
  return dist;
}

bool Graph::connected() const {
  if (size() <= 1) return true;
  const auto dist = distances_from(0);
  return std::none_of(dist.begin(), dist.end(), [](int d) { return d < 0; });
}

Graph generate(const GraphRecipe& recipe) {
  const int n = recipe.n;
  if (n < 1) throw GraphError("generator needs n >= 1");
  std::vector<Edge> edges;
  switch (recipe.kind) {
    case GraphKind::kPath:
      for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
      break;
    case GraphKind::kCycle:
      if (n < 3) throw GraphError("cycle needs n >= 3");
      for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
      break;
    case GraphKind::kStar:
      for (int i = 1; i < n; ++i) edges.emplace_back(0, i);
      break;
    case GraphKind::kComplete:
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
      break;
    case GraphKind::kTree: {
      // Random recursive tree: vertex i attaches to a uniform earlier vertex.
      std::mt19937_64 rng(recipe.seed);
      for (int i = 1; i < n; ++i) {
        std::uniform_int_distribution<int> parent(0, i - 1);
        edges.emplace_back(parent(rng), i);
      }
      break;
    }
    case GraphKind::kGnp: {
      if (!(recipe.probability >= 0.0 && recipe.probability <= 1.0)) {
        throw GraphError("gnp probability must lie in [0,1]");
      }
      std::mt19937_64 rng(recipe.seed);
      std::bernoulli_distribution coin(recipe.probability);
      for (int attempt = 0; attempt < std::max(1, recipe.max_attempts); ++attempt) {
        edges.clear();
        for (int i = 0; i < n; ++i)
          for (int j = i + 1; j < n; ++j)
            if (coin(rng)) edges.emplace_back(i, j);
        Graph g = Graph::build(n, edges);
        if (!recipe.require_connected || g.connected()) return g;
      }
      throw GraphError("gnp: no connected sample within the attempt limit");
    }
  }
  return Graph::build(n, edges);
}

GraphRecipe parse_recipe(const std::string& descriptor) {
  const auto parts = split(descriptor, ':');
  if (parts.size() < 2) throw GraphError("graph descriptor '" + descriptor + "' needs kind:n");
  GraphRecipe recipe;
  const std::string& kind = parts[0];
  if (kind == "path") recipe.kind = GraphKind::kPath;
  else if (kind == "cycle") recipe.kind = GraphKind::kCycle;
  else if (kind == "star") recipe.kind = GraphKind::kStar;
  else if (kind == "complete") recipe.kind = GraphKind::kComplete;
  else if (kind == "tree") recipe.kind = GraphKind::kTree;
  else if (kind == "gnp") recipe.kind = GraphKind::kGnp;
  else throw GraphError("unknown graph kind '" + kind + "'");
  recipe.n = parse_number<int>(parts[1], descriptor);

  std::size_t next = 2;
  if (recipe.kind == GraphKind::kGnp) {
    if (parts.size() < 3) throw GraphError("gnp descriptor needs gnp:n:p");
    try {
      std::size_t used = 0;
      recipe.probability = std::stod(parts[2], &used);
      if (used != parts[2].size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw GraphError("invalid probability '" + parts[2] + "'");
    }
    next = 3;
  }
  for (; next < parts.size(); ++next) {
    const std::string& opt = parts[next];
    if (opt.rfind("seed=", 0) == 0) {
      recipe.seed = parse_number<std::uint64_t>(opt.substr(5), descriptor);
    } else if (opt == "connected") {
      recipe.require_connected = true;
    } else {
      throw GraphError("unknown graph option '" + opt + "'");
    }
  }
  return recipe;
}

namespace {

std::uint32_t canonical_mask(int n, std::uint32_t mask, const std::vector<Edge>& slots) {
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> index(n, std::vector<int>(n, -1));
  for (std::size_t s = 0; s < slots.size(); ++s) {
    index[slots[s].first][slots[s].second] = static_cast<int>(s);
    index[slots[s].second][slots[s].first] = static_cast<int>(s);
  }
  std::uint32_t best = mask;
  do {
    std::uint32_t image = 0;
    for (std::size_t s = 0; s < slots.size(); ++s) {
      if (mask & (1u << s)) {
        image |= 1u << index[perm[slots[s].first]][perm[slots[s].second]];
      }
    }
    best = std::min(best, image);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

}  // namespace

std::vector<Graph> all_connected_graphs(int n) {
  if (n < 1 || n > 6) throw GraphError("all_connected_graphs supports 1 <= n <= 6");
  std::vector<Edge> slots;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) slots.emplace_back(i, j);
  std::set<std::uint32_t> seen;
  std::vector<Graph> out;
  const std::uint32_t limit = 1u << slots.size();
  for (std::uint32_t mask = 0; mask < limit; ++mask) {
    std::vector<Edge> edges;
    for (std::size_t s = 0; s < slots.size(); ++s)
      if (mask & (1u << s)) edges.push_back(slots[s]);
    if (static_cast<int>(edges.size()) < n - 1) continue;
    Graph g = Graph::build(n, edges);
    if (!g.connected()) continue;
    if (seen.insert(canonical_mask(n, mask, slots)).second) out.push_back(std::move(g));
  }
  return out;
}

std::string describe(const Graph& g) {
  std::ostringstream out;
  out << "n=" << g.size() << " edges=[";
  bool first = true;
  for (const auto& [a, b] : g.edges()) {
    out << (first ? "" : ",") << "(" << a << "," << b << ")";
    first = false;
  }
  out << "]";
  return out.str();
}

}  // namespace r1w1
