#pragma once

// JSON/CSV surfaces and selector strings shared by the CLI and the Python
// module.

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "r1w1/algorithms.hpp"
#include "r1w1/engine.hpp"
#include "r1w1/transformer.hpp"
#include "r1w1/verifier.hpp"

namespace r1w1 {

using Json = nlohmann::json;

/// { "n": int, "edges": [[i,j], ...] }
Graph graph_from_json(const Json& doc);
Json graph_to_json(const Graph& g);

/// A path to a graph file, or a generator descriptor ("cycle:8", "gnp:20:0.2:seed=7").
Graph load_graph(const std::string& file_or_descriptor);

/// { "states": [[q], ...] } or [[x,c], ...]; ⊥ is written as null.
/// Out-of-domain values are sanitized into the declared domain.
Configuration configuration_from_json(const Algorithm& alg, const Graph& g, const Json& doc);
Json configuration_to_json(const Algorithm& alg, const Configuration& cfg);

/// A named preset (see make_initial) or "file:<path>".
Configuration load_initial(const Algorithm& alg, const Graph& g, const std::string& spec);

/// "random:<seed>", "round-robin", "greedy", "scripted:0,2,1".
DaemonPolicy parse_daemon(const std::string& selector);

/// Comma-separated fault list, e.g.
///   drop_all:rounds=10..20
///   drop_random:p=0.3:rounds=0..50
///   corrupt:ids=1,2:cycle=7
/// Round and cycle numbers may be written relative to `post` ("post+1..post+10"),
/// resolved against the supplied `post_round` / `post_cycle`.
FaultPlan parse_fault_plan(const std::string& text, std::int64_t post_round = 0,
                           std::int64_t post_cycle = 0);

Json record_to_json(const Algorithm& alg, const Record& r);
Json move_to_json(const Algorithm& alg, const MoveRecord& m);
/// One MoveRecord per line: {"step":k,"proc":i,"rule":r,"writes":{...}}.
void write_trace_jsonl(std::ostream& out, const Algorithm& alg, const Trace& trace);

Json report_to_json(const Algorithm& alg, const VerificationReport& report);
Json metrics_to_json(const RunMetrics& metrics);

}  // namespace r1w1
