#include "r1w1/verifier.hpp"

#include <algorithm>
#include <cstdint>

#include "r1w1/algorithms.hpp"

namespace r1w1 {

namespace {

int members_among(const Graph& g, ProcessId i, const std::vector<bool>& s) {
  int count = 0;
  for (ProcessId j : g.neighbors(i)) count += s[j] ? 1 : 0;
  return count;
}

bool is_k_dominating(const Graph& g, const std::vector<bool>& s, int k) {
  for (ProcessId i = 0; i < g.size(); ++i) {
    if (!s[i] && members_among(g, i, s) < k) return false;
  }
  return true;
}

bool is_k_dependent(const Graph& g, const std::vector<bool>& s, int k) {
  for (ProcessId i = 0; i < g.size(); ++i) {
    if (s[i] && members_among(g, i, s) > k) return false;
  }
  return true;
}

std::vector<bool> from_mask(int n, std::uint32_t mask) {
  std::vector<bool> s(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) s[i] = (mask >> i) & 1u;
  return s;
}

std::uint32_t to_mask(const std::vector<bool>& s) {
  std::uint32_t mask = 0;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s[i]) mask |= 1u << i;
  return mask;
}

void require_small(const Graph& g) {
  if (g.size() > 20) throw std::invalid_argument("exhaustive oracle limited to 20 processes");
}

}  // namespace

bool oracle_maximal_matching(const Graph& g, const std::vector<Edge>& matching) {
  std::vector<int> degree(static_cast<std::size_t>(g.size()), 0);
  for (const auto& [a, b] : matching) {
    if (!g.adjacent(a, b)) return false;
    if (++degree[a] > 1 || ++degree[b] > 1) return false;
  }
  for (const auto& [a, b] : g.edges()) {
    if (degree[a] == 0 && degree[b] == 0) return false;
  }
  return true;
}

bool oracle_minimal_k_dominating(const Graph& g, const std::vector<bool>& in_set, int k) {
  if (!is_k_dominating(g, in_set, k)) return false;
  std::vector<bool> smaller = in_set;
  for (ProcessId v = 0; v < g.size(); ++v) {
    if (!in_set[v]) continue;
    smaller[v] = false;
    const bool still = is_k_dominating(g, smaller, k);
    smaller[v] = true;
    if (still) return false;
  }
  return true;
}

bool oracle_minimal_k_dominating_exhaustive(const Graph& g, const std::vector<bool>& in_set,
                                            int k) {
  require_small(g);
  if (!is_k_dominating(g, in_set, k)) return false;
  const std::uint32_t full = to_mask(in_set);
  // Every proper submask of `full`.
  for (std::uint32_t sub = (full - 1) & full;; sub = (sub - 1) & full) {
    if (sub != full && is_k_dominating(g, from_mask(g.size(), sub), k)) return false;
    if (sub == 0) break;
  }
  return true;
}

bool oracle_maximal_k_dependent(const Graph& g, const std::vector<bool>& in_set, int k) {
  if (!is_k_dependent(g, in_set, k)) return false;
  std::vector<bool> larger = in_set;
  for (ProcessId v = 0; v < g.size(); ++v) {
    if (in_set[v]) continue;
    larger[v] = true;
    const bool still = is_k_dependent(g, larger, k);
    larger[v] = false;
    if (still) return false;
  }
  return true;
}

bool oracle_maximal_k_dependent_exhaustive(const Graph& g, const std::vector<bool>& in_set,
                                           int k) {
  require_small(g);
  if (!is_k_dependent(g, in_set, k)) return false;
  const std::uint32_t base = to_mask(in_set);
  const std::uint32_t all = g.size() == 32 ? ~0u : ((1u << g.size()) - 1);
  const std::uint32_t free_bits = all & ~base;
  // Every non-empty submask of the complement, added to S.
  for (std::uint32_t extra = free_bits; extra != 0; extra = (extra - 1) & free_bits) {
    if (is_k_dependent(g, from_mask(g.size(), base | extra), k)) return false;
  }
  return true;
}

bool oracle_accepts(const Algorithm& alg, const Graph& g, const Configuration& cfg) {
  switch (alg.kind()) {
    case AlgorithmKind::kMaximalMatching:
      return oracle_maximal_matching(g, matched_pairs(g, cfg));
    case AlgorithmKind::kMinimalKDomination:
      return oracle_minimal_k_dominating(g, member_set(cfg), threshold_of(alg));
    case AlgorithmKind::kMaximalKDependence:
      return oracle_maximal_k_dependent(g, member_set(cfg), threshold_of(alg));
    case AlgorithmKind::kOther:
      return true;
  }
  return true;
}

ConfigSpace::ConfigSpace(const Algorithm& alg, const Graph& g, std::uint64_t cap) {
  domains_.reserve(static_cast<std::size_t>(g.size()));
  for (ProcessId i = 0; i < g.size(); ++i) {
    domains_.push_back(alg.domain(g, i));
    std::sort(domains_.back().begin(), domains_.back().end());
  }
  std::string product;
  std::uint64_t total = 1;
  bool wraps = false;
  for (const auto& d : domains_) {
    strides_.push_back(total);
    product += (product.empty() ? "" : "·") + std::to_string(d.size());
    wraps = wraps || __builtin_mul_overflow(total, static_cast<std::uint64_t>(d.size()), &total);
  }
  if (wraps || total > cap) {
    throw StateSpaceTooLarge("configuration space " + product + " = " +
                             (wraps ? std::string("more than 2^64") : std::to_string(total)) +
                             " of " + alg.name() + " exceeds the cap of " + std::to_string(cap));
  }
  size_ = total;
}

Configuration ConfigSpace::decode(std::uint64_t code) const {
  std::vector<Record> records;
  records.reserve(domains_.size());
  for (const auto& d : domains_) {
    records.push_back(d[code % d.size()]);
    code /= d.size();
  }
  return Configuration(std::move(records));
}

std::uint64_t ConfigSpace::encode(const Configuration& cfg) const {
  std::uint64_t code = 0;
  for (std::size_t i = 0; i < domains_.size(); ++i) {
    const auto& d = domains_[i];
    const auto it = std::lower_bound(d.begin(), d.end(), cfg[static_cast<ProcessId>(i)]);
    if (it == d.end() || *it != cfg[static_cast<ProcessId>(i)]) {
      throw ContractError("record of process " + std::to_string(i) + " is outside its domain");
    }
    code += strides_[i] * static_cast<std::uint64_t>(it - d.begin());
  }
  return code;
}

ClosureResult verify_closure(const Algorithm& alg, const Graph& g, std::uint64_t cap) {
  ClosureResult result;
  enumerate_configs(
      alg, g,
      [&](const Configuration& cfg) {
        ++result.explored;
        const bool legit = alg.legitimate(g, cfg);
        const bool silent = is_silent(alg, g, cfg);
        result.legitimate += legit ? 1 : 0;
        if (silent && !oracle_accepts(alg, g, cfg)) ++result.oracle_failures;
        if (legit != silent && result.pass) {
          result.pass = false;
          result.counterexample = cfg;
          result.detail = legit ? "legitimate configuration has an enabled process"
                                : "silent configuration is not legitimate";
        }
      },
      cap);
  if (result.oracle_failures > 0 && result.pass) {
    result.pass = false;
    result.detail = "silent configuration rejected by the problem oracle";
  }
  return result;
}

namespace {

std::vector<std::uint64_t> successors(const Algorithm& alg, const Graph& g,
                                      const ConfigSpace& space, const Configuration& cfg) {
  std::vector<std::uint64_t> out;
  for (ProcessId i = 0; i < g.size(); ++i) {
    const NeighborhoodView view = view_of(g, cfg, i);
    for (RuleId r = 1; r <= alg.rule_count(); ++r) {
      if (!alg.guard(r, view)) continue;
      std::vector<ProcessId> choices = alg.witnesses(r, view);
      if (choices.empty()) choices.push_back(kNoProcess);
      for (ProcessId w : choices) {
        const auto move = apply_move(alg, g, cfg, i, r,
                                     w == kNoProcess ? std::nullopt : std::optional<ProcessId>(w));
        out.push_back(space.encode(move.next));
      }
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

ConvergenceResult verify_convergence(const Algorithm& alg, const Graph& g, std::int64_t bound,
                                     std::uint64_t cap) {
  const ConfigSpace space(alg, g, cap);
  ConvergenceResult result;
  result.bound = bound;

  enum : std::uint8_t { kWhite = 0, kGray = 1, kBlack = 2 };
  constexpr std::uint64_t kNone = ~std::uint64_t{0};
  std::vector<std::uint8_t> color(space.size(), kWhite);
  std::vector<std::int32_t> longest(space.size(), 0);
  std::vector<std::uint64_t> next_on_longest(space.size(), kNone);

  struct Frame {
    std::uint64_t code;
    std::vector<std::uint64_t> succ;
    std::size_t cursor = 0;
  };
  std::vector<Frame> stack;

  auto stack_path = [&](std::size_t from) {
    std::vector<Configuration> path;
    for (std::size_t k = from; k < stack.size(); ++k) path.push_back(space.decode(stack[k].code));
    return path;
  };

  for (std::uint64_t root = 0; root < space.size(); ++root) {
    if (color[root] != kWhite) continue;
    color[root] = kGray;
    stack.push_back({root, successors(alg, g, space, space.decode(root))});
    ++result.explored;

    while (!stack.empty()) {
      Frame& top = stack.back();
      if (top.cursor < top.succ.size()) {
        const std::uint64_t s = top.succ[top.cursor++];
        ++result.transitions;
        if (color[s] == kGray) {
          std::size_t start = 0;
          while (stack[start].code != s) ++start;
          result.pass = false;
          result.path = stack_path(start);
          result.path.push_back(space.decode(s));
          result.detail = "livelock: the move relation has a cycle";
          return result;
        }
        if (color[s] == kWhite) {
          color[s] = kGray;
          ++result.explored;
          stack.push_back({s, successors(alg, g, space, space.decode(s))});
        }
        continue;
      }

      const std::uint64_t code = top.code;
      if (top.succ.empty()) {
        ++result.terminals;
        const Configuration cfg = space.decode(code);
        if (!alg.legitimate(g, cfg)) {
          result.pass = false;
          result.path = stack_path(0);
          result.detail = "execution ends in an illegitimate silent configuration";
          return result;
        }
        if (!oracle_accepts(alg, g, cfg)) ++result.oracle_failures;
      } else {
        std::int32_t best = -1;
        for (std::uint64_t s : top.succ) {
          if (longest[s] > best) {
            best = longest[s];
            next_on_longest[code] = s;
          }
        }
        longest[code] = best + 1;
      }
      color[code] = kBlack;
      stack.pop_back();
    }
  }

  std::uint64_t start = 0;
  for (std::uint64_t code = 0; code < space.size(); ++code) {
    if (longest[code] > longest[start]) start = code;
  }
  result.worst_moves = longest[start];
  for (std::uint64_t code = start; code != kNone; code = next_on_longest[code]) {
    result.path.push_back(space.decode(code));
  }

  if (result.oracle_failures > 0) {
    result.pass = false;
    result.detail = "terminal configuration rejected by the problem oracle";
  } else if (result.worst_moves > bound) {
    result.pass = false;
    result.detail = "longest execution exceeds the move bound";
  }
  return result;
}

VerificationReport verify(const Algorithm& alg, const Graph& g, std::uint64_t cap) {
  VerificationReport report;
  report.graph = describe(g);
  report.algorithm = alg.name();
  report.configs = ConfigSpace(alg, g, cap).size();
  report.analytic_bound = analytic_move_bound(alg, g);
  report.closure = verify_closure(alg, g, cap);
  report.convergence = verify_convergence(alg, g, report.analytic_bound, cap);
  report.worst_moves = report.convergence.worst_moves;
  return report;
}

}  // namespace r1w1
