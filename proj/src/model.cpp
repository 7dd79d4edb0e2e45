#include "r1w1/model.hpp"

#include <algorithm>

namespace r1w1 {

NeighborhoodView::NeighborhoodView(const Graph& g, ProcessId center, Record self,
                                   std::vector<Record> neighbor_states)
    : graph_(&g),
      center_(center),
      self_(self),
      neighbors_(g.neighbors(center)),
      neighbor_states_(std::move(neighbor_states)) {
  if (neighbor_states_.size() != neighbors_.size()) {
    throw ContractError("view of process " + std::to_string(center) +
                        " needs one record per neighbor");
  }
}

bool NeighborhoodView::visible(ProcessId j) const {
  return j == center_ || std::binary_search(neighbors_.begin(), neighbors_.end(), j);
}

const Record& NeighborhoodView::state(ProcessId j) const {
  if (j == center_) return self_;
  const auto it = std::lower_bound(neighbors_.begin(), neighbors_.end(), j);
  if (it == neighbors_.end() || *it != j) {
    throw ContractError("process " + std::to_string(center_) + " cannot read process " +
                        std::to_string(j));
  }
  return neighbor_states_[static_cast<std::size_t>(it - neighbors_.begin())];
}

int NeighborhoodView::degree(ProcessId j) const {
  if (!visible(j)) {
    throw ContractError("degree of invisible process " + std::to_string(j));
  }
  return graph_->degree(j);
}

NeighborhoodView view_of(const Graph& g, const Configuration& cfg, ProcessId i) {
  std::vector<Record> states;
  const auto nbrs = g.neighbors(i);
  states.reserve(nbrs.size());
  for (ProcessId j : nbrs) states.push_back(cfg[j]);
  return NeighborhoodView(g, i, cfg[i], std::move(states));
}

bool valid_configuration(const Algorithm& alg, const Graph& g, const Configuration& cfg) {
  if (cfg.size() != g.size()) return false;
  for (ProcessId i = 0; i < g.size(); ++i) {
    if (!alg.in_domain(g, i, cfg[i])) return false;
  }
  return true;
}

Configuration sanitized(const Algorithm& alg, const Graph& g, Configuration cfg) {
  for (ProcessId i = 0; i < cfg.size(); ++i) cfg[i] = alg.sanitize(g, i, cfg[i]);
  return cfg;
}

}  // namespace r1w1
