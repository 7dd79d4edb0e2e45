#include "r1w1/algorithms.hpp"

#include <charconv>
#include <random>

namespace r1w1 {

namespace {

int parse_k(const std::string& selector, std::size_t colon) {
  const std::string rest = selector.substr(colon + 1);
  if (rest.rfind("k=", 0) != 0) {
    throw std::invalid_argument("algorithm selector '" + selector + "' expects ':k=<int>'");
  }
  int k = 0;
  const char* first = rest.data() + 2;
  const char* last = rest.data() + rest.size();
  auto [ptr, ec] = std::from_chars(first, last, k);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("invalid k in '" + selector + "'");
  }
  return k;
}

bool counting_kind(const Algorithm& alg) {
  return alg.kind() == AlgorithmKind::kMinimalKDomination ||
         alg.kind() == AlgorithmKind::kMaximalKDependence;
}

}  // namespace

std::unique_ptr<Algorithm> parse_algorithm(const std::string& selector) {
  if (selector == "mmat11") return make_mmat11();
  if (selector == "broken-fixture") return make_broken_matching();
  const auto colon = selector.find(':');
  const std::string head = selector.substr(0, colon);
  if (colon != std::string::npos && head == "mkdom11") return make_mkdom11(parse_k(selector, colon));
  if (colon != std::string::npos && head == "mkdep11") return make_mkdep11(parse_k(selector, colon));
  if (head == "mkdom11" || head == "mkdep11") {
    throw std::invalid_argument("algorithm '" + head + "' needs ':k=<int>'");
  }
  throw std::invalid_argument("unknown algorithm '" + selector + "'");
}

std::int64_t analytic_move_bound(const Algorithm& alg, const Graph& g) {
  if (auto bound = alg.move_bound(g)) return *bound;
  return default_move_budget(g);
}

std::int64_t TraceAudit::total() const {
  return matched_decreased + dangling_increased + potentials_unchanged + fix_rule_repeated +
         fix_rule_not_first + rule2_over_twice + rule3_over_once + count_destabilized +
         bound_exceeded + replay_mismatch + write_locality;
}

TraceAudit audit_trace(const Algorithm& alg, const Graph& g, const Trace& trace) {
  TraceAudit audit;
  if (replay(trace) != trace.final_config) ++audit.replay_mismatch;
  if (alg.move_bound(g) && trace.move_count() > *alg.move_bound(g)) ++audit.bound_exceeded;

  for (const MoveRecord& m : trace.moves) {
    for (const Write& w : m.writes) {
      if (w.target != m.mover && !g.adjacent(m.mover, w.target)) ++audit.write_locality;
    }
  }

  Configuration cfg = trace.initial;
  if (alg.kind() == AlgorithmKind::kMaximalMatching) {
    MatchingPotentials before = mmat_potentials(g, cfg);
    for (const MoveRecord& m : trace.moves) {
      cfg = apply_writes(cfg, m.writes);
      const MatchingPotentials after = mmat_potentials(g, cfg);
      if (after.matched < before.matched) ++audit.matched_decreased;
      if (after.dangling > before.dangling) ++audit.dangling_increased;
      if (after == before) ++audit.potentials_unchanged;
      before = after;
    }
    return audit;
  }
  if (!counting_kind(alg)) return audit;

  const auto n = static_cast<std::size_t>(g.size());
  std::vector<std::int64_t> moves(n, 0), fixes(n, 0), rule2(n, 0), rule3(n, 0);
  auto correct_at = [&](const Configuration& c, ProcessId i) {
    int count = 0;
    for (ProcessId j : g.neighbors(i)) count += counting::x(c[j]) == 1 ? 1 : 0;
    return counting::c(c[i]) == count;
  };
  std::vector<bool> was_correct(n);
  for (ProcessId i = 0; i < g.size(); ++i) was_correct[i] = correct_at(cfg, i);

  for (const MoveRecord& m : trace.moves) {
    const auto i = static_cast<std::size_t>(m.mover);
    if (m.rule == 1) {
      if (++fixes[i] == 2) ++audit.fix_rule_repeated;
      if (moves[i] > 0) ++audit.fix_rule_not_first;
    } else if (m.rule == 2) {
      if (++rule2[i] == 3) ++audit.rule2_over_twice;
    } else if (m.rule == 3) {
      if (++rule3[i] == 2) ++audit.rule3_over_once;
    }
    ++moves[i];
    cfg = apply_writes(cfg, m.writes);
    for (ProcessId p = 0; p < g.size(); ++p) {
      const bool now = correct_at(cfg, p);
      if (was_correct[p] && !now) ++audit.count_destabilized;
      was_correct[p] = was_correct[p] || now;
    }
  }
  return audit;
}

Configuration make_initial(const Algorithm& alg, const Graph& g, const std::string& preset) {
  const bool counting = counting_kind(alg);
  std::vector<Record> records(static_cast<std::size_t>(g.size()));
  auto require_counting = [&] {
    if (!counting) throw std::invalid_argument("preset '" + preset + "' needs a counting algorithm");
  };

  if (preset.rfind("random:", 0) == 0) {
    std::uint64_t seed = 0;
    const std::string digits = preset.substr(7);
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), seed);
    if (ec != std::errc() || ptr != digits.data() + digits.size()) {
      throw std::invalid_argument("invalid seed in preset '" + preset + "'");
    }
    std::mt19937_64 rng(seed);
    return random_configuration(alg, g, rng);
  }
  for (ProcessId i = 0; i < g.size(); ++i) {
    const int deg = g.degree(i);
    if (preset == "all-bottom" || preset == "all-zero") {
      records[i] = counting ? counting::make(0, 0) : matching::with_q(kNoProcess);
    } else if (preset == "all-ones-correct-counters") {
      require_counting();
      records[i] = counting::make(1, deg);
    } else if (preset == "all-ones-zero-counters") {
      require_counting();
      records[i] = counting::make(1, 0);
    } else if (preset == "max-counters") {
      require_counting();
      records[i] = counting::make(0, deg);
    } else if (preset == "pointer-cycle") {
      if (counting) throw std::invalid_argument("preset 'pointer-cycle' needs the matching algorithm");
      // q_i = next neighbor above i, wrapping to the lowest.
      const auto nbrs = g.neighbors(i);
      ProcessId target = kNoProcess;
      for (ProcessId j : nbrs) {
        if (j > i) {
          target = j;
          break;
        }
      }
      if (target == kNoProcess && !nbrs.empty()) target = nbrs.front();
      records[i] = matching::with_q(target);
    } else {
      throw std::invalid_argument("unknown initial configuration preset '" + preset + "'");
    }
  }
  return Configuration(std::move(records));
}

}  // namespace r1w1
