#include "r1w1/engine.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>

namespace r1w1 {

std::vector<RuleId> enabled_rules(const Algorithm& alg, const Graph& g, const Configuration& cfg,
                                  ProcessId i) {
  const NeighborhoodView view = view_of(g, cfg, i);
  std::vector<RuleId> rules;
  for (RuleId r = 1; r <= alg.rule_count(); ++r) {
    if (alg.guard(r, view)) rules.push_back(r);
  }
  return rules;
}

bool is_enabled(const Algorithm& alg, const Graph& g, const Configuration& cfg, ProcessId i) {
  const NeighborhoodView view = view_of(g, cfg, i);
  for (RuleId r = 1; r <= alg.rule_count(); ++r) {
    if (alg.guard(r, view)) return true;
  }
  return false;
}

std::vector<ProcessId> enabled_processes(const Algorithm& alg, const Graph& g,
                                         const Configuration& cfg) {
  std::vector<ProcessId> out;
  for (ProcessId i = 0; i < g.size(); ++i) {
    if (is_enabled(alg, g, cfg, i)) out.push_back(i);
  }
  return out;
}

bool is_silent(const Algorithm& alg, const Graph& g, const Configuration& cfg) {
  for (ProcessId i = 0; i < g.size(); ++i) {
    if (is_enabled(alg, g, cfg, i)) return false;
  }
  return true;
}

Configuration apply_writes(const Configuration& cfg, const WriteSet& writes) {
  Configuration next = cfg;
  for (const Write& w : writes) next[w.target] = w.value;
  return next;
}

AppliedMove apply_move(const Algorithm& alg, const Graph& g, const Configuration& cfg,
                       ProcessId i, RuleId rule, std::optional<ProcessId> witness) {
  const NeighborhoodView view = view_of(g, cfg, i);
  if (rule < 1 || rule > alg.rule_count() || !alg.guard(rule, view)) {
    throw ContractError(alg.name() + ": rule " + std::to_string(rule) +
                        " is not enabled at process " + std::to_string(i));
  }
  const std::vector<ProcessId> candidates = alg.witnesses(rule, view);
  ProcessId bound = kNoProcess;
  if (!candidates.empty()) {
    bound = witness.value_or(candidates.front());
    if (!std::binary_search(candidates.begin(), candidates.end(), bound)) {
      throw ContractError("process " + std::to_string(bound) + " does not satisfy rule " +
                          std::to_string(rule) + " at process " + std::to_string(i));
    }
  } else if (witness && *witness != kNoProcess) {
    throw ContractError("rule " + std::to_string(rule) + " takes no witness");
  }

  WriteSet writes = alg.command(rule, view, bound);
  std::sort(writes.begin(), writes.end(),
            [](const Write& a, const Write& b) { return a.target < b.target; });
  for (std::size_t k = 0; k < writes.size(); ++k) {
    const Write& w = writes[k];
    if (!view.visible(w.target)) {
      throw ContractError(alg.name() + ": process " + std::to_string(i) + " wrote process " +
                          std::to_string(w.target) + " outside its closed neighborhood");
    }
    if (k > 0 && writes[k - 1].target == w.target) {
      throw ContractError("duplicate write to process " + std::to_string(w.target));
    }
    if (!alg.in_domain(g, w.target, w.value)) {
      throw ContractError(alg.name() + ": write to process " + std::to_string(w.target) +
                          " leaves the variable domain");
    }
  }

  AppliedMove out{apply_writes(cfg, writes), MoveRecord{}};
  out.record.mover = i;
  out.record.rule = rule;
  out.record.witness = bound;
  out.record.writes = std::move(writes);
  return out;
}

Daemon::Daemon(DaemonPolicy policy) : policy_(std::move(policy)) {
  if (const auto* seeded = std::get_if<SeededRandom>(&policy_)) rng_.seed(seeded->seed);
}

ProcessId Daemon::select(std::span<const ProcessId> enabled, const Algorithm& alg,
                         const Graph& g, const Configuration& cfg) {
  if (enabled.empty()) throw ContractError("daemon asked to select from an empty set");
  return std::visit(
      [&](auto& p) -> ProcessId {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, SeededRandom>) {
          std::uniform_int_distribution<std::size_t> pick(0, enabled.size() - 1);
          return enabled[pick(rng_)];
        } else if constexpr (std::is_same_v<P, RoundRobinEnabled>) {
          const auto it = std::upper_bound(enabled.begin(), enabled.end(), last_mover_);
          return it == enabled.end() ? enabled.front() : *it;
        } else if constexpr (std::is_same_v<P, GreedyAdversarial>) {
          return select_greedy(enabled, alg, g, cfg);
        } else {
          while (script_pos_ < p.order.size()) {
            const ProcessId next = p.order[script_pos_++];
            if (std::binary_search(enabled.begin(), enabled.end(), next)) return next;
          }
          return enabled.front();
        }
      },
      policy_);
}

ProcessId Daemon::select_greedy(std::span<const ProcessId> enabled, const Algorithm& alg,
                                const Graph& g, const Configuration& cfg) const {
  // Prefer the move that changes the progress measure least; without a
  // measure, prefer the move that leaves the most processes enabled.
  const auto before = alg.progress(g, cfg);
  ProcessId best = enabled.front();
  std::int64_t best_score = std::numeric_limits<std::int64_t>::max();
  for (ProcessId i : enabled) {
    const RuleId rule = enabled_rules(alg, g, cfg, i).front();
    const Configuration next = apply_move(alg, g, cfg, i, rule).next;
    std::int64_t score = 0;
    if (before) {
      score = std::abs(*alg.progress(g, next) - *before);
    } else {
      score = -static_cast<std::int64_t>(enabled_processes(alg, g, next).size());
    }
    if (score < best_score) {
      best_score = score;
      best = i;
    }
  }
  return best;
}

std::int64_t Trace::rule_total(RuleId rule) const {
  std::int64_t total = 0;
  for (const auto& per_process : counters) {
    if (static_cast<std::size_t>(rule) < per_process.size()) total += per_process[rule];
  }
  return total;
}

std::int64_t default_move_budget(const Graph& g) { return 10LL * g.size() + 100; }

Trace execute(const Algorithm& alg, const Graph& g, const Configuration& initial,
              const DaemonPolicy& policy, const ExecuteOptions& options) {
  if (!valid_configuration(alg, g, initial)) {
    throw ContractError(alg.name() + ": initial configuration is outside the declared domains");
  }
  const std::int64_t budget = options.max_moves.value_or(default_move_budget(g));
  if (budget < 0) throw ContractError("max_moves must be non-negative");

  Trace trace;
  trace.initial = initial;
  trace.counters.assign(static_cast<std::size_t>(g.size()),
                        std::vector<std::int64_t>(static_cast<std::size_t>(alg.rule_count()) + 1, 0));
  Daemon daemon(policy);
  std::mt19937_64 witness_rng(options.witness_seed);
  Configuration cfg = initial;

  while (true) {
    const std::vector<ProcessId> enabled = enabled_processes(alg, g, cfg);
    if (enabled.empty()) {
      trace.silent = true;
      break;
    }
    if (trace.move_count() >= budget) {
      trace.budget_exhausted = true;
      break;
    }
    const ProcessId mover = daemon.select(enabled, alg, g, cfg);
    const RuleId rule = enabled_rules(alg, g, cfg, mover).front();
    std::optional<ProcessId> witness;
    if (options.witness == WitnessPolicy::kSeededRandom) {
      const auto candidates = alg.witnesses(rule, view_of(g, cfg, mover));
      if (!candidates.empty()) {
        std::uniform_int_distribution<std::size_t> pick(0, candidates.size() - 1);
        witness = candidates[pick(witness_rng)];
      }
    }
    AppliedMove move = apply_move(alg, g, cfg, mover, rule, witness);
    move.record.step = trace.moves.size();
    ++trace.counters[mover][rule];
    daemon.record_move(mover);
    cfg = std::move(move.next);
    trace.moves.push_back(std::move(move.record));
  }
  trace.final_config = cfg;
  return trace;
}

Configuration replay(const Trace& trace) {
  Configuration cfg = trace.initial;
  for (const MoveRecord& m : trace.moves) cfg = apply_writes(cfg, m.writes);
  return cfg;
}

}  // namespace r1w1
