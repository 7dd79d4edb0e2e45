#include <algorithm>

#include "r1w1/algorithms.hpp"

namespace r1w1 {

namespace {

using counting::c;
using counting::make;
using counting::x;

/// Shared skeleton of the two counter-maintaining set algorithms. Rule 1
/// fixes the local counter; rules 2 and 3 flip x_i and adjust every
/// neighbor's counter within its clamp range.
class CountingAlgorithm : public Algorithm {
 public:
  explicit CountingAlgorithm(int k) : k_(k) {}

  int threshold() const { return k_; }

  std::vector<std::string> variable_names() const override { return {"x", "c"}; }

  std::vector<Record> domain(const Graph& g, ProcessId i) const override {
    std::vector<Record> out;
    const int deg = g.degree(i);
    for (Value xv = 0; xv <= 1; ++xv)
      for (Value cv = 0; cv <= deg; ++cv) out.push_back(make(xv, cv));
    return out;
  }

  Record sanitize(const Graph& g, ProcessId i, Record r) const override {
    return make(x(r) != 0 ? 1 : 0, std::clamp<Value>(c(r), 0, g.degree(i)));
  }

  int rule_count() const override { return 3; }

  bool guard(RuleId rule, const NeighborhoodView& v) const override {
    const int count = count_of(v);
    if (rule == 1) return c(v.self()) != count;
    if (rule == 2 || rule == 3) return c(v.self()) == count && flip_guard(rule, v);
    return false;
  }

  WriteSet command(RuleId rule, const NeighborhoodView& v, ProcessId) const override {
    const ProcessId self = v.center();
    if (rule == 1) return {{self, make(x(v.self()), count_of(v))}};
    const bool joining = joins(rule);
    WriteSet writes{{self, make(joining ? 1 : 0, c(v.self()))}};
    const auto nbrs = v.neighbors();
    const auto states = v.neighbor_states();
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const Value cj = c(states[k]);
      if (joining && cj < v.degree(nbrs[k])) {
        writes.push_back({nbrs[k], make(x(states[k]), cj + 1)});
      } else if (!joining && cj > 0) {
        writes.push_back({nbrs[k], make(x(states[k]), cj - 1)});
      }
    }
    return writes;
  }

  std::optional<std::int64_t> move_bound(const Graph& g) const override {
    return 4LL * g.size();
  }

 protected:
  static int count_at(const Graph& g, const Configuration& cfg, ProcessId i) {
    int count = 0;
    for (ProcessId j : g.neighbors(i)) count += x(cfg[j]) == 1 ? 1 : 0;
    return count;
  }

  /// Guard clauses of rules 2/3 beyond counter correctness.
  virtual bool flip_guard(RuleId rule, const NeighborhoodView& v) const = 0;
  /// Whether the rule sets x_i := 1.
  virtual bool joins(RuleId rule) const = 0;

  int k_;
};

class MinimalKDomination final : public CountingAlgorithm {
 public:
  using CountingAlgorithm::CountingAlgorithm;

  std::string name() const override { return "mkdom11:k=" + std::to_string(k_); }
  AlgorithmKind kind() const override { return AlgorithmKind::kMinimalKDomination; }

  std::string rule_label(RuleId rule) const override {
    switch (rule) {
      case 1: return "fix-counter";
      case 2: return "k-domination";
      case 3: return "minimality";
      default: return "?";
    }
  }

  bool legitimate(const Graph& g, const Configuration& cfg) const override {
    for (ProcessId i = 0; i < g.size(); ++i) {
      const Value ci = c(cfg[i]);
      if (ci != count_at(g, cfg, i)) return false;
      if (x(cfg[i]) == 0 && !(ci >= k_)) return false;
      if (x(cfg[i]) == 1 && !(ci < k_)) {
        const auto nbrs = g.neighbors(i);
        const bool removable_blocked = std::any_of(nbrs.begin(), nbrs.end(), [&](ProcessId j) {
          return x(cfg[j]) == 0 && c(cfg[j]) <= k_;
        });
        if (!removable_blocked) return false;
      }
    }
    return true;
  }

 private:
  bool joins(RuleId rule) const override { return rule == 2; }

  bool flip_guard(RuleId rule, const NeighborhoodView& v) const override {
    const Value ci = c(v.self());
    if (rule == 2) return x(v.self()) == 0 && ci < k_;
    return x(v.self()) == 1 && ci >= k_ &&
           std::all_of(v.neighbor_states().begin(), v.neighbor_states().end(),
                       [this](const Record& r) { return x(r) == 1 || c(r) > k_; });
  }
};

class MaximalKDependence final : public CountingAlgorithm {
 public:
  using CountingAlgorithm::CountingAlgorithm;

  std::string name() const override { return "mkdep11:k=" + std::to_string(k_); }
  AlgorithmKind kind() const override { return AlgorithmKind::kMaximalKDependence; }

  std::string rule_label(RuleId rule) const override {
    switch (rule) {
      case 1: return "fix-counter";
      case 2: return "k-dependency";
      case 3: return "maximality";
      default: return "?";
    }
  }

  bool legitimate(const Graph& g, const Configuration& cfg) const override {
    for (ProcessId i = 0; i < g.size(); ++i) {
      const Value ci = c(cfg[i]);
      if (ci != count_at(g, cfg, i)) return false;
      if (x(cfg[i]) == 1 && !(ci <= k_)) return false;
      if (x(cfg[i]) == 0 && !(ci > k_)) {
        const auto nbrs = g.neighbors(i);
        const bool saturated_neighbor = std::any_of(nbrs.begin(), nbrs.end(), [&](ProcessId j) {
          return x(cfg[j]) == 1 && c(cfg[j]) >= k_;
        });
        if (!saturated_neighbor) return false;
      }
    }
    return true;
  }

 private:
  bool joins(RuleId rule) const override { return rule == 3; }

  bool flip_guard(RuleId rule, const NeighborhoodView& v) const override {
    const Value ci = c(v.self());
    if (rule == 2) return x(v.self()) == 1 && ci > k_;
    return x(v.self()) == 0 && ci <= k_ &&
           std::all_of(v.neighbor_states().begin(), v.neighbor_states().end(),
                       [this](const Record& r) { return x(r) == 0 || c(r) < k_; });
  }
};

}  // namespace

int count_of(const NeighborhoodView& view) {
  const auto states = view.neighbor_states();
  return static_cast<int>(
      std::count_if(states.begin(), states.end(), [](const Record& r) { return x(r) == 1; }));
}

std::unique_ptr<Algorithm> make_mkdom11(int k) {
  if (k < 1) throw std::invalid_argument("mkdom11 needs k >= 1, got " + std::to_string(k));
  return std::make_unique<MinimalKDomination>(k);
}

std::unique_ptr<Algorithm> make_mkdep11(int k) {
  if (k < 0) throw std::invalid_argument("mkdep11 needs k >= 0, got " + std::to_string(k));
  return std::make_unique<MaximalKDependence>(k);
}

int threshold_of(const Algorithm& alg) {
  if (const auto* counting = dynamic_cast<const CountingAlgorithm*>(&alg)) {
    return counting->threshold();
  }
  return 0;
}

std::vector<bool> member_set(const Configuration& cfg) {
  std::vector<bool> s(static_cast<std::size_t>(cfg.size()));
  for (ProcessId i = 0; i < cfg.size(); ++i) s[i] = x(cfg[i]) == 1;
  return s;
}

}  // namespace r1w1
