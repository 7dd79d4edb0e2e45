#include "r1w1/transformer.hpp"

#include <algorithm>
#include <stdexcept>

namespace r1w1 {

namespace {

std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

template <typename Rng>
Record random_record(const Algorithm& alg, const Graph& g, ProcessId i, Rng& rng) {
  const auto dom = alg.domain(g, i);
  std::uniform_int_distribution<std::size_t> pick(0, dom.size() - 1);
  return dom[pick(rng)];
}

}  // namespace

std::uint64_t node_seed(std::uint64_t seed, ProcessId i) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(i));
}

void validate(const TrParams& params, int n) {
  if (params.K < 2) throw std::invalid_argument("K must be >= 2");
  if (params.n_prime && *params.n_prime < n) throw std::invalid_argument("n' must be >= n");
  if (params.start_phase < 1 || params.start_phase > 5) {
    throw std::invalid_argument("start_phase must lie in 1..5");
  }
  if (params.max_cycles < 0) throw std::invalid_argument("max_cycles must be non-negative");
  for (const Fault& f : params.faults.faults) {
    if (const auto* d = std::get_if<DropRandomMessages>(&f)) {
      if (!(d->probability >= 0.0 && d->probability <= 1.0)) {
        throw std::invalid_argument("drop probability must lie in [0,1]");
      }
    }
  }
}

std::int64_t vote_range(const TrParams& params, int n) {
  validate(params, n);
  return static_cast<std::int64_t>(params.K) * params.n_prime.value_or(n);
}

ProcessId winner_candidate(ProcessId self, std::optional<std::int64_t> own_vote,
                           std::span<const Vote> received) {
  ProcessId best = kNoProcess;
  std::int64_t best_value = 0;
  bool unique = false;
  auto consider = [&](ProcessId sender, std::int64_t value) {
    if (best == kNoProcess || value > best_value) {
      best = sender;
      best_value = value;
      unique = true;
    } else if (value == best_value) {
      unique = false;
    }
  };
  if (own_vote) consider(self, *own_vote);
  for (const Vote& v : received) consider(v.sender, v.value);
  if (!unique || best == self) return kNoProcess;
  return best;
}

bool execution_condition(ProcessId self, bool enabled, std::span<const ProcessId> neighbors,
                         std::span<const WinnerNotice> received) {
  if (!enabled) return false;
  for (ProcessId j : neighbors) {
    const auto it = std::find_if(received.begin(), received.end(),
                                 [j](const WinnerNotice& n) { return n.sender == j; });
    if (it == received.end() || it->named != self) return false;
  }
  return true;
}

Simulator::Simulator(const Algorithm& alg, const Graph& g, const Configuration& initial,
                     TrParams params)
    : alg_(&alg),
      graph_(&g),
      params_(std::move(params)),
      vote_range_(vote_range(params_, g.size())),
      fault_rng_(splitmix64(params_.seed ^ 0xFA17FA17FA17FA17ULL)) {
  if (!valid_configuration(alg, g, initial)) {
    throw ContractError(alg.name() + ": initial configuration is outside the declared domains");
  }
  const auto n = static_cast<std::size_t>(g.size());
  nodes_.resize(n);
  node_rngs_.reserve(n);
  for (ProcessId i = 0; i < g.size(); ++i) node_rngs_.emplace_back(node_seed(params_.seed, i));

  std::mt19937_64 init_rng(splitmix64(params_.seed ^ 0x1417C0DEULL));
  for (ProcessId i = 0; i < g.size(); ++i) {
    NodeRuntime& node = nodes_[i];
    node.x = initial[i];
    for (ProcessId j : g.neighbors(i)) {
      node.cache.push_back(params_.cache_init == CacheInit::kCoherent
                               ? initial[j]
                               : random_record(alg, g, j, init_rng));
    }
    if (params_.scramble_runtime) {
      std::bernoulli_distribution coin(0.5);
      std::uniform_int_distribution<std::int64_t> vote(1, vote_range_);
      const auto nbrs = g.neighbors(i);
      std::uniform_int_distribution<std::size_t> pick(0, nbrs.size());
      node.g = coin(init_rng);
      node.r = vote(init_rng);
      const std::size_t w = pick(init_rng);
      node.w = w < nbrs.size() ? nbrs[w] : kNoProcess;
      node.executed = coin(init_rng);
      node.modified = coin(init_rng);
    }
  }
}

int Simulator::phase() const {
  return static_cast<int>((round_ + params_.start_phase - 1) % 5) + 1;
}

std::size_t Simulator::slot(ProcessId i, ProcessId j) const {
  const auto nbrs = graph_->neighbors(i);
  const auto it = std::lower_bound(nbrs.begin(), nbrs.end(), j);
  if (it == nbrs.end() || *it != j) {
    throw ContractError("process " + std::to_string(j) + " is not a neighbor of " +
                        std::to_string(i));
  }
  return static_cast<std::size_t>(it - nbrs.begin());
}

NeighborhoodView Simulator::cached_view(ProcessId i) const {
  const NodeRuntime& node = nodes_[i];
  return NeighborhoodView(*graph_, i, node.x, node.cache);
}

Configuration Simulator::projected() const {
  std::vector<Record> records;
  records.reserve(nodes_.size());
  for (const NodeRuntime& node : nodes_) records.push_back(node.x);
  return Configuration(std::move(records));
}

bool Simulator::cache_coherent() const {
  for (ProcessId i = 0; i < graph_->size(); ++i) {
    const auto nbrs = graph_->neighbors(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      if (nodes_[i].cache[k] != nodes_[nbrs[k]].x) return false;
    }
  }
  return true;
}

void Simulator::corrupt(std::span<const ProcessId> ids) {
  for (ProcessId i : ids) {
    NodeRuntime& node = nodes_.at(static_cast<std::size_t>(i));
    node.x = random_record(*alg_, *graph_, i, fault_rng_);
    const auto nbrs = graph_->neighbors(i);
    for (std::size_t k = 0; k < nbrs.size(); ++k) {
      node.cache[k] = random_record(*alg_, *graph_, nbrs[k], fault_rng_);
    }
  }
}

std::optional<Message> Simulator::compose(ProcessId i, int phase) const {
  const NodeRuntime& node = nodes_[i];
  switch (phase) {
    case 1:
      return Message{i, StatePayload{node.x}};
    case 2:
      if (node.g) return Message{i, VotePayload{node.r}};
      return std::nullopt;
    case 3:
      if (node.w != kNoProcess) return Message{i, WinnerPayload{node.w}};
      return std::nullopt;
    case 4:
      if (node.executed) {
        UpdatePayload update{node.x, {}};
        const auto nbrs = graph_->neighbors(i);
        for (std::size_t k = 0; k < nbrs.size(); ++k) update.cache.push_back({nbrs[k], node.cache[k]});
        return Message{i, std::move(update)};
      }
      return std::nullopt;
    case 5:
      if (node.modified) return Message{i, StatePayload{node.x}};
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

bool Simulator::dropped(std::int64_t round, ProcessId, ProcessId) {
  bool drop = false;
  for (const Fault& f : params_.faults.faults) {
    if (const auto* all = std::get_if<DropAllMessages>(&f)) {
      if (round >= all->first_round && round <= all->last_round) drop = true;
    } else if (const auto* some = std::get_if<DropRandomMessages>(&f)) {
      if (round >= some->first_round && round <= some->last_round) {
        std::bernoulli_distribution coin(some->probability);
        if (coin(fault_rng_)) drop = true;
      }
    }
  }
  return drop;
}

void Simulator::execute_command(ProcessId i) {
  NodeRuntime& node = nodes_[i];
  const NeighborhoodView view = cached_view(i);
  RuleId rule = 0;
  for (RuleId r = 1; r <= alg_->rule_count(); ++r) {
    if (alg_->guard(r, view)) {
      rule = r;
      break;
    }
  }
  if (rule == 0) return;
  const auto candidates = alg_->witnesses(rule, view);
  const ProcessId witness = candidates.empty() ? kNoProcess : candidates.front();
  WriteSet writes = alg_->command(rule, view, witness);
  std::sort(writes.begin(), writes.end(),
            [](const Write& a, const Write& b) { return a.target < b.target; });
  for (const Write& w : writes) {
    if (w.target == i) {
      node.x = w.value;
    } else {
      node.cache[slot(i, w.target)] = w.value;
    }
  }
  node.executed = true;
  MoveRecord record;
  record.step = current_.moves.size();
  record.mover = i;
  record.rule = rule;
  record.witness = witness;
  record.writes = std::move(writes);
  current_.moves.push_back(std::move(record));
  current_.metrics.executed.push_back(i);
}

void Simulator::receive(ProcessId i, int phase) {
  NodeRuntime& node = nodes_[i];
  switch (phase) {
    case 1: {
      for (const Message& m : node.inbox) {
        if (const auto* s = std::get_if<StatePayload>(&m.payload)) node.cache[slot(i, m.sender)] = s->x;
      }
      const NeighborhoodView view = cached_view(i);
      node.g = false;
      for (RuleId r = 1; r <= alg_->rule_count() && !node.g; ++r) node.g = alg_->guard(r, view);
      if (node.g) {
        std::uniform_int_distribution<std::int64_t> vote(1, vote_range_);
        node.r = vote(node_rngs_[i]);
      }
      break;
    }
    case 2: {
      std::vector<Vote> votes;
      for (const Message& m : node.inbox) {
        if (const auto* v = std::get_if<VotePayload>(&m.payload)) votes.push_back({m.sender, v->r});
      }
      node.w = winner_candidate(i, node.g ? std::optional<std::int64_t>(node.r) : std::nullopt,
                                votes);
      break;
    }
    case 3: {
      std::vector<WinnerNotice> notices;
      for (const Message& m : node.inbox) {
        if (const auto* w = std::get_if<WinnerPayload>(&m.payload)) notices.push_back({m.sender, w->w});
      }
      if (execution_condition(i, node.g, graph_->neighbors(i), notices)) execute_command(i);
      break;
    }
    case 4: {
      for (const Message& m : node.inbox) {
        const auto* u = std::get_if<UpdatePayload>(&m.payload);
        if (u == nullptr) continue;
        node.cache[slot(i, m.sender)] = u->x;
        for (const Write& entry : u->cache) {
          if (entry.target == i && entry.value != node.x) {
            node.x = entry.value;
            node.modified = true;
          }
        }
      }
      break;
    }
    case 5: {
      for (const Message& m : node.inbox) {
        if (const auto* s = std::get_if<StatePayload>(&m.payload)) node.cache[slot(i, m.sender)] = s->x;
      }
      break;
    }
    default:
      break;
  }
}

void Simulator::open_cycle() {
  current_ = CycleRecord{};
  current_.metrics.cycle = cycle_index();
  for (const Fault& f : params_.faults.faults) {
    if (const auto* c = std::get_if<CorruptState>(&f)) {
      if (c->at_cycle == current_.metrics.cycle) corrupt(c->ids);
    }
  }
  current_.pre = projected();
  cycle_open_ = true;
}

void Simulator::close_cycle() {
  for (NodeRuntime& node : nodes_) {
    node.executed = false;
    node.modified = false;
  }
  current_.metrics.coherent = cache_coherent();
  current_.post = projected();
  if (current_.metrics.has_phase1 && current_.metrics.enabled == 0) converged_ = true;
  history_.push_back(std::move(current_));
  current_ = CycleRecord{};
  cycle_open_ = false;
}

void Simulator::step() {
  const int ph = phase();
  if (!cycle_open_) open_cycle();
  if (ph == 1) current_.metrics.has_phase1 = true;

  const int n = graph_->size();
  std::vector<std::optional<Message>> outbox(static_cast<std::size_t>(n));
  for (ProcessId i = 0; i < n; ++i) {
    outbox[i] = compose(i, ph);
    if (outbox[i]) ++current_.metrics.bcasts;
  }
  for (NodeRuntime& node : nodes_) node.inbox.clear();
  for (ProcessId i = 0; i < n; ++i) {
    if (!outbox[i]) continue;
    for (ProcessId j : graph_->neighbors(i)) {
      if (!dropped(round_, i, j)) nodes_[j].inbox.push_back(*outbox[i]);
    }
  }
  for (ProcessId i = 0; i < n; ++i) receive(i, ph);

  if (ph == 1) {
    current_.metrics.enabled = std::count_if(nodes_.begin(), nodes_.end(),
                                             [](const NodeRuntime& node) { return node.g; });
  }
  ++round_;
  if (ph == 5) close_cycle();
}

void Simulator::finish_cycle() {
  do {
    step();
  } while (cycle_open_);
}

bool Simulator::run_until_silent(std::int64_t max_cycles) {
  converged_ = false;
  for (std::int64_t c = 0; c < max_cycles; ++c) {
    finish_cycle();
    if (converged_) return true;
  }
  return false;
}

RunMetrics Simulator::metrics() const {
  RunMetrics m;
  m.cycles = static_cast<std::int64_t>(history_.size());
  m.rounds = round_;
  m.converged = converged_;
  for (const CycleRecord& c : history_) {
    m.bcasts += c.metrics.bcasts;
    m.moves += static_cast<std::int64_t>(c.moves.size());
    if (c.metrics.has_phase1) {
      if (!check_exclusion(*graph_, c.metrics.executed)) ++m.exclusion_violations;
      if (!c.metrics.coherent) ++m.incoherent_boundaries;
    }
    m.per_cycle.push_back(c.metrics);
  }
  return m;
}

TransformResult run_transformed(const Algorithm& alg, const Graph& g, const Configuration& initial,
                                const TrParams& params) {
  Simulator sim(alg, g, initial, params);
  sim.run_until_silent(params.max_cycles);
  TransformResult result;
  result.metrics = sim.metrics();
  result.trace.initial = initial;
  result.trace.cycles = sim.history();
  result.trace.final_config = sim.projected();
  return result;
}

bool check_exclusion(const Graph& g, std::span<const ProcessId> executed) {
  for (std::size_t a = 0; a < executed.size(); ++a) {
    const auto dist = g.distances_from(executed[a]);
    for (std::size_t b = a + 1; b < executed.size(); ++b) {
      const int d = dist[executed[b]];
      if (d >= 0 && d < 3) return false;
    }
  }
  return true;
}

WitnessOutcome serialization_witness(const Algorithm& alg, const Graph& g,
                                     const CycleRecord& cycle) {
  if (!check_exclusion(g, cycle.metrics.executed)) return WitnessOutcome::kNotApplicable;
  std::vector<std::size_t> order(cycle.moves.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::optional<Configuration> reference;
  do {
    Configuration cfg = cycle.pre;
    try {
      for (std::size_t k : order) {
        const MoveRecord& m = cycle.moves[k];
        auto applied = apply_move(alg, g, cfg, m.mover, m.rule,
                                  m.witness == kNoProcess ? std::nullopt
                                                          : std::optional<ProcessId>(m.witness));
        if (applied.record.writes != m.writes) return WitnessOutcome::kMismatch;
        cfg = std::move(applied.next);
      }
    } catch (const ContractError&) {
      return WitnessOutcome::kMismatch;
    }
    if (!reference) {
      reference = cfg;
    } else if (*reference != cfg) {
      return WitnessOutcome::kMismatch;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return *reference == cycle.post ? WitnessOutcome::kEquivalent : WitnessOutcome::kMismatch;
}

Trace equivalent_serial_trace(const Algorithm& alg, const Graph& g,
                              const std::vector<CycleRecord>& cycles) {
  Trace trace;
  trace.counters.assign(static_cast<std::size_t>(g.size()),
                        std::vector<std::int64_t>(static_cast<std::size_t>(alg.rule_count()) + 1, 0));
  bool started = false;
  for (const CycleRecord& c : cycles) {
    if (!c.metrics.has_phase1) continue;
    if (!started) {
      trace.initial = c.pre;
      started = true;
    }
    for (MoveRecord m : c.moves) {
      m.step = trace.moves.size();
      ++trace.counters[m.mover][m.rule];
      trace.moves.push_back(std::move(m));
    }
    trace.final_config = c.post;
  }
  trace.silent = started && is_silent(alg, g, trace.final_config);
  return trace;
}

double winner_probability_estimate(const Graph& g, const std::vector<bool>& enabled, int K,
                                   std::int64_t trials, std::uint64_t seed,
                                   std::optional<int> n_prime) {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (enabled.size() != static_cast<std::size_t>(g.size())) {
    throw std::invalid_argument("enabled flags must cover every process");
  }
  TrParams params;
  params.K = K;
  params.n_prime = n_prime;
  const std::int64_t range = vote_range(params, g.size());
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::int64_t> vote(1, range);

  const int n = g.size();
  std::vector<std::int64_t> r(static_cast<std::size_t>(n), 0);
  std::vector<ProcessId> w(static_cast<std::size_t>(n), kNoProcess);
  std::int64_t hits = 0;
  for (std::int64_t t = 0; t < trials; ++t) {
    for (ProcessId i = 0; i < n; ++i) r[i] = enabled[i] ? vote(rng) : 0;
    for (ProcessId i = 0; i < n; ++i) {
      std::vector<Vote> votes;
      for (ProcessId j : g.neighbors(i))
        if (enabled[j]) votes.push_back({j, r[j]});
      w[i] = winner_candidate(i, enabled[i] ? std::optional<std::int64_t>(r[i]) : std::nullopt,
                              votes);
    }
    for (ProcessId i = 0; i < n; ++i) {
      std::vector<WinnerNotice> notices;
      for (ProcessId j : g.neighbors(i))
        if (w[j] != kNoProcess) notices.push_back({j, w[j]});
      if (execution_condition(i, enabled[i], g.neighbors(i), notices)) {
        ++hits;
        break;
      }
    }
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

}  // namespace r1w1
