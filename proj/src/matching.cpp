#include <algorithm>

#include "r1w1/algorithms.hpp"

namespace r1w1 {

namespace {

using matching::q;
using matching::with_q;

class MaximalMatching : public Algorithm {
 public:
  std::string name() const override { return "mmat11"; }
  AlgorithmKind kind() const override { return AlgorithmKind::kMaximalMatching; }
  std::vector<std::string> variable_names() const override { return {"q"}; }

  std::vector<Record> domain(const Graph& g, ProcessId i) const override {
    std::vector<Record> out{with_q(kNoProcess)};
    for (ProcessId j : g.neighbors(i)) out.push_back(with_q(j));
    return out;
  }

  Record sanitize(const Graph& g, ProcessId i, Record r) const override {
    const ProcessId target = q(r);
    return with_q(target >= 0 && target < g.size() && g.adjacent(i, target) ? target
                                                                          : kNoProcess);
  }

  int rule_count() const override { return 5; }

  std::string rule_label(RuleId rule) const override {
    switch (rule) {
      case 1: return "accept";
      case 2: return "force-pair";
      case 3: return "force-target";
      case 4: return "switch";
      case 5: return "give-up";
      default: return "?";
    }
  }

  bool guard(RuleId rule, const NeighborhoodView& v) const override {
    const ProcessId self = v.center();
    const ProcessId target = q(v.self());
    switch (rule) {
      case 1:
      case 2:
        return target == kNoProcess && has_witness(rule, v);
      case 3:
        return points_to_neighbor(v) && q(v.state(target)) == kNoProcess;
      case 4:
        return points_to_neighbor(v) && unrequited(v) && has_witness(4, v);
      case 5:
        return points_to_neighbor(v) && unrequited(v) &&
               std::none_of(v.neighbor_states().begin(), v.neighbor_states().end(),
                            [self](const Record& r) { return q(r) == self || q(r) == kNoProcess; });
      default:
        return false;
    }
  }

  std::vector<ProcessId> witnesses(RuleId rule, const NeighborhoodView& v) const override {
    const ProcessId self = v.center();
    std::vector<ProcessId> out;
    const auto nbrs = v.neighbors();
    const auto states = v.neighbor_states();
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      const ProcessId qk = q(states[k]);
      const bool match = (rule == 1 && qk == self) || (rule == 2 && qk == kNoProcess) ||
                         (rule == 4 && (qk == self || qk == kNoProcess));
      if (match) out.push_back(nbrs[k]);
    }
    return out;
  }

  WriteSet command(RuleId rule, const NeighborhoodView& v, ProcessId witness) const override {
    const ProcessId self = v.center();
    switch (rule) {
      case 1:
        return {{self, with_q(witness)}};
      case 2:
      case 4:
        return {{self, with_q(witness)}, {witness, with_q(self)}};
      case 3:
        return {{q(v.self()), with_q(self)}};
      case 5:
        return {{self, with_q(kNoProcess)}};
      default:
        throw ContractError("mmat11 has no rule " + std::to_string(rule));
    }
  }

  bool legitimate(const Graph& g, const Configuration& cfg) const override {
    for (ProcessId i = 0; i < g.size(); ++i) {
      const ProcessId qi = q(cfg[i]);
      if (qi != kNoProcess) {
        if (q(cfg[qi]) != i) return false;
      } else {
        for (ProcessId j : g.neighbors(i)) {
          const ProcessId qj = q(cfg[j]);
          if (qj == i || qj == kNoProcess) return false;
        }
      }
    }
    return true;
  }

  std::optional<std::int64_t> progress(const Graph& g, const Configuration& cfg) const override {
    const auto p = mmat_potentials(g, cfg);
    return p.matched * (g.size() + 1) - p.dangling;
  }

  std::optional<std::int64_t> move_bound(const Graph& g) const override {
    return g.size() / 2 + g.size();
  }

 private:
  static bool points_to_neighbor(const NeighborhoodView& v) {
    const ProcessId target = q(v.self());
    return target != kNoProcess && target != v.center() && v.visible(target);
  }

  // q_j ∉ {P_i, ⊥} where P_j = q_i
  static bool unrequited(const NeighborhoodView& v) {
    const ProcessId back = q(v.state(q(v.self())));
    return back != v.center() && back != kNoProcess;
  }
};

class MatchingWithoutGiveUp : public MaximalMatching {
 public:
  std::string name() const override { return "broken-fixture"; }
  AlgorithmKind kind() const override { return AlgorithmKind::kOther; }
  int rule_count() const override { return 4; }
};

}  // namespace

std::unique_ptr<Algorithm> make_mmat11() { return std::make_unique<MaximalMatching>(); }

std::unique_ptr<Algorithm> make_broken_matching() {
  return std::make_unique<MatchingWithoutGiveUp>();
}

std::vector<Edge> matched_pairs(const Graph& g, const Configuration& cfg) {
  std::vector<Edge> pairs;
  for (ProcessId i = 0; i < g.size(); ++i) {
    const ProcessId qi = q(cfg[i]);
    if (qi > i && g.adjacent(i, qi) && q(cfg[qi]) == i) pairs.emplace_back(i, qi);
  }
  return pairs;
}

MatchingPotentials mmat_potentials(const Graph& g, const Configuration& cfg) {
  MatchingPotentials p;
  p.matched = static_cast<std::int64_t>(matched_pairs(g, cfg).size());
  for (ProcessId i = 0; i < g.size(); ++i) {
    const ProcessId qi = q(cfg[i]);
    if (qi == kNoProcess || !g.adjacent(i, qi)) continue;
    const ProcessId back = q(cfg[qi]);
    if (back != i && back != kNoProcess) ++p.dangling;
  }
  return p;
}

}  // namespace r1w1
