#include "r1w1/io.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
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

std::int64_t parse_int(const std::string& text, const std::string& context) {
  std::int64_t value = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || first == last) {
    throw std::invalid_argument("invalid integer '" + text + "' in '" + context + "'");
  }
  return value;
}

// "17", "post", "post+3", "post-1"
std::int64_t parse_anchor(const std::string& text, std::int64_t post, const std::string& context) {
  if (text.rfind("post", 0) == 0) {
    const std::string rest = text.substr(4);
    if (rest.empty()) return post;
    if (rest[0] == '+') return post + parse_int(rest.substr(1), context);
    if (rest[0] == '-') return post - parse_int(rest.substr(1), context);
    throw std::invalid_argument("bad anchor '" + text + "' in '" + context + "'");
  }
  return parse_int(text, context);
}

std::pair<std::int64_t, std::int64_t> parse_range(const std::string& text, std::int64_t post,
                                                  const std::string& context) {
  const auto dots = text.find("..");
  if (dots == std::string::npos) {
    const auto v = parse_anchor(text, post, context);
    return {v, v};
  }
  return {parse_anchor(text.substr(0, dots), post, context),
          parse_anchor(text.substr(dots + 2), post, context)};
}

// Matching records hold process pointers, written with null for ⊥.
bool pointer_valued(const Algorithm& alg) {
  return alg.kind() == AlgorithmKind::kMaximalMatching || alg.kind() == AlgorithmKind::kOther;
}

Json value_json(const Algorithm& alg, Value v) {
  return pointer_valued(alg) && v == kNoProcess ? Json(nullptr) : Json(v);
}

Json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("'" + path + "' is not valid JSON: " + e.what());
  }
}

}  // namespace

Graph graph_from_json(const Json& doc) {
  if (!doc.is_object() || !doc.contains("n") || !doc.contains("edges")) {
    throw GraphError("graph JSON needs \"n\" and \"edges\"");
  }
  std::vector<Edge> edges;
  for (const auto& e : doc.at("edges")) {
    if (!e.is_array() || e.size() != 2) throw GraphError("each edge must be a [i,j] pair");
    edges.emplace_back(e[0].get<ProcessId>(), e[1].get<ProcessId>());
  }
  return Graph::build(doc.at("n").get<int>(), edges);
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [a, b] : g.edges()) edges.push_back({a, b});
  return Json{{"n", g.size()}, {"edges", edges}};
}

Graph load_graph(const std::string& file_or_descriptor) {
  if (std::filesystem::is_regular_file(file_or_descriptor)) {
    return graph_from_json(read_json_file(file_or_descriptor));
  }
  return generate(parse_recipe(file_or_descriptor));
}

Configuration configuration_from_json(const Algorithm& alg, const Graph& g, const Json& doc) {
  const Json& states = doc.is_object() ? doc.at("states") : doc;
  if (!states.is_array() || static_cast<int>(states.size()) != g.size()) {
    throw std::invalid_argument("configuration needs one state per process");
  }
  const std::size_t width = alg.variable_names().size();
  std::vector<Record> records;
  for (ProcessId i = 0; i < g.size(); ++i) {
    const Json& s = states[i];
    Record r;
    const Json values = s.is_array() ? s : Json::array({s});
    if (values.size() != width) {
      throw std::invalid_argument("state of process " + std::to_string(i) + " needs " +
                                  std::to_string(width) + " values");
    }
    for (std::size_t v = 0; v < width; ++v) {
      r.vars[v] = values[v].is_null() ? kNoProcess : values[v].get<Value>();
    }
    records.push_back(alg.sanitize(g, i, r));
  }
  return Configuration(std::move(records));
}

Json record_to_json(const Algorithm& alg, const Record& r) {
  Json out = Json::object();
  const auto names = alg.variable_names();
  for (std::size_t v = 0; v < names.size(); ++v) {
    out[names[v]] = value_json(alg, r.vars[v]);
  }
  return out;
}

Json configuration_to_json(const Algorithm& alg, const Configuration& cfg) {
  Json states = Json::array();
  const std::size_t width = alg.variable_names().size();
  for (const Record& r : cfg.records()) {
    Json s = Json::array();
    for (std::size_t v = 0; v < width; ++v) {
      s.push_back(value_json(alg, r.vars[v]));
    }
    states.push_back(s);
  }
  return Json{{"states", states}};
}

Configuration load_initial(const Algorithm& alg, const Graph& g, const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) {
    return configuration_from_json(alg, g, read_json_file(spec.substr(5)));
  }
  return make_initial(alg, g, spec);
}

DaemonPolicy parse_daemon(const std::string& selector) {
  if (selector == "round-robin") return RoundRobinEnabled{};
  if (selector == "greedy") return GreedyAdversarial{};
  if (selector.rfind("random:", 0) == 0) {
    return SeededRandom{static_cast<std::uint64_t>(parse_int(selector.substr(7), selector))};
  }
  if (selector.rfind("scripted:", 0) == 0) {
    Scripted s;
    for (const auto& id : split(selector.substr(9), ',')) {
      s.order.push_back(static_cast<ProcessId>(parse_int(id, selector)));
    }
    return s;
  }
  throw std::invalid_argument("unknown daemon '" + selector +
                              "' (random:<seed>, round-robin, greedy, scripted:<ids>)");
}

FaultPlan parse_fault_plan(const std::string& text, std::int64_t post_round,
                           std::int64_t post_cycle) {
  FaultPlan plan;
  if (text.empty()) return plan;
  // Faults are separated by ';' so that id lists may use ','.
  for (const auto& item : split(text, ';')) {
    const auto fields = split(item, ':');
    if (fields.empty()) continue;
    const std::string& kind = fields[0];
    if (kind == "drop_all") {
      DropAllMessages d;
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k].rfind("rounds=", 0) == 0) {
          std::tie(d.first_round, d.last_round) = parse_range(fields[k].substr(7), post_round, item);
        } else {
          throw std::invalid_argument("unknown drop_all option '" + fields[k] + "'");
        }
      }
      plan.faults.emplace_back(d);
    } else if (kind == "drop_random") {
      DropRandomMessages d;
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k].rfind("p=", 0) == 0) {
          d.probability = std::stod(fields[k].substr(2));
        } else if (fields[k].rfind("rounds=", 0) == 0) {
          std::tie(d.first_round, d.last_round) = parse_range(fields[k].substr(7), post_round, item);
        } else {
          throw std::invalid_argument("unknown drop_random option '" + fields[k] + "'");
        }
      }
      plan.faults.emplace_back(d);
    } else if (kind == "corrupt") {
      CorruptState c;
      for (std::size_t k = 1; k < fields.size(); ++k) {
        if (fields[k].rfind("ids=", 0) == 0) {
          for (const auto& id : split(fields[k].substr(4), ',')) {
            c.ids.push_back(static_cast<ProcessId>(parse_int(id, item)));
          }
        } else if (fields[k].rfind("cycle=", 0) == 0) {
          c.at_cycle = parse_anchor(fields[k].substr(6), post_cycle, item);
        } else {
          throw std::invalid_argument("unknown corrupt option '" + fields[k] + "'");
        }
      }
      plan.faults.emplace_back(c);
    } else {
      throw std::invalid_argument("unknown fault '" + kind + "'");
    }
  }
  return plan;
}

Json move_to_json(const Algorithm& alg, const MoveRecord& m) {
  Json writes = Json::object();
  for (const Write& w : m.writes) writes[std::to_string(w.target)] = record_to_json(alg, w.value);
  Json out{{"step", m.step}, {"proc", m.mover}, {"rule", m.rule}, {"writes", writes}};
  if (m.witness != kNoProcess) out["witness"] = m.witness;
  return out;
}

void write_trace_jsonl(std::ostream& out, const Algorithm& alg, const Trace& trace) {
  for (const MoveRecord& m : trace.moves) out << move_to_json(alg, m).dump() << '\n';
}

Json report_to_json(const Algorithm& alg, const VerificationReport& report) {
  auto path_json = [&](const std::vector<Configuration>& path) {
    Json out = Json::array();
    for (const auto& cfg : path) out.push_back(configuration_to_json(alg, cfg)["states"]);
    return out;
  };
  Json closure{{"pass", report.closure.pass},
               {"explored", report.closure.explored},
               {"legitimate", report.closure.legitimate},
               {"oracle_failures", report.closure.oracle_failures}};
  if (report.closure.counterexample) {
    closure["counterexample"] = configuration_to_json(alg, *report.closure.counterexample)["states"];
    closure["detail"] = report.closure.detail;
  }
  Json convergence{{"pass", report.convergence.pass},
                   {"explored", report.convergence.explored},
                   {"transitions", report.convergence.transitions},
                   {"terminals", report.convergence.terminals},
                   {"oracle_failures", report.convergence.oracle_failures},
                   {"worst_moves", report.convergence.worst_moves},
                   {"bound", report.convergence.bound}};
  if (!report.convergence.pass) {
    convergence["detail"] = report.convergence.detail;
    convergence["counterexample_path"] = path_json(report.convergence.path);
  } else {
    convergence["longest_path"] = path_json(report.convergence.path);
  }
  return Json{{"graph", report.graph},
              {"algorithm", report.algorithm},
              {"configs", report.configs},
              {"closure", closure},
              {"convergence", convergence},
              {"worst_moves", report.worst_moves},
              {"analytic_bound", report.analytic_bound},
              {"pass", report.pass()}};
}

Json metrics_to_json(const RunMetrics& metrics) {
  Json per_cycle = Json::array();
  for (const CycleMetrics& c : metrics.per_cycle) {
    per_cycle.push_back({{"cycle", c.cycle},
                         {"executed", c.executed},
                         {"bcasts", c.bcasts},
                         {"coherent", c.coherent},
                         {"enabled", c.enabled},
                         {"complete", c.has_phase1}});
  }
  return Json{{"cycles", metrics.cycles},
              {"rounds", metrics.rounds},
              {"bcasts", metrics.bcasts},
              {"moves", metrics.moves},
              {"converged", metrics.converged},
              {"exclusion_violations", metrics.exclusion_violations},
              {"incoherent_boundaries", metrics.incoherent_boundaries},
              {"per_cycle", per_cycle}};
}

}  // namespace r1w1
