#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "r1w1/io.hpp"

namespace py = pybind11;
using namespace r1w1;

namespace {

py::object to_python(const Json& doc) {
  return py::module_::import("json").attr("loads")(doc.dump());
}

Graph as_graph(const py::object& g) {
  if (py::isinstance<Graph>(g)) return g.cast<Graph>();
  if (py::isinstance<py::str>(g)) return load_graph(g.cast<std::string>());
  throw py::type_error("graph must be a Graph or a descriptor string");
}

std::vector<ProcessId> to_vector(std::span<const ProcessId> s) { return {s.begin(), s.end()}; }

py::object run(const std::string& alg_selector, const py::object& graph, const std::string& daemon,
               const std::string& init, std::optional<std::int64_t> max_moves) {
  const auto alg = parse_algorithm(alg_selector);
  const Graph g = as_graph(graph);
  ExecuteOptions opts;
  opts.max_moves = max_moves;
  const Trace t = execute(*alg, g, load_initial(*alg, g, init), parse_daemon(daemon), opts);
  Json moves = Json::array();
  for (const MoveRecord& m : t.moves) moves.push_back(move_to_json(*alg, m));
  Json per_rule = Json::object();
  for (RuleId r = 1; r <= alg->rule_count(); ++r) per_rule[std::to_string(r)] = t.rule_total(r);
  return to_python(Json{{"moves", t.move_count()},
                        {"trace", moves},
                        {"per_rule", per_rule},
                        {"initial", configuration_to_json(*alg, t.initial)["states"]},
                        {"final", configuration_to_json(*alg, t.final_config)["states"]},
                        {"silent", t.silent},
                        {"budget_exhausted", t.budget_exhausted},
                        {"legitimate", alg->legitimate(g, t.final_config)},
                        {"bound", analytic_move_bound(*alg, g)}});
}

py::object verify_py(const std::string& alg_selector, const py::object& graph, std::uint64_t cap) {
  const auto alg = parse_algorithm(alg_selector);
  const Graph g = as_graph(graph);
  return to_python(report_to_json(*alg, verify(*alg, g, cap)));
}

py::object transform(const std::string& alg_selector, const py::object& graph, int K,
                     std::uint64_t seed, int start_phase, std::optional<std::string> init,
                     std::optional<int> n_prime, std::int64_t max_cycles) {
  const auto alg = parse_algorithm(alg_selector);
  const Graph g = as_graph(graph);
  TrParams p;
  p.K = K;
  p.seed = seed;
  p.start_phase = start_phase;
  p.n_prime = n_prime;
  p.max_cycles = max_cycles;
  const Configuration initial = load_initial(*alg, g, init.value_or("random:" + std::to_string(seed)));
  const TransformResult r = run_transformed(*alg, g, initial, p);
  Json doc = metrics_to_json(r.metrics);
  doc["final"] = configuration_to_json(*alg, r.trace.final_config)["states"];
  doc["legitimate"] = alg->legitimate(g, r.trace.final_config);
  return to_python(doc);
}

}  // namespace

PYBIND11_MODULE(_r1w1, m) {
  m.doc() = "Neighborhood-writing self-stabilizing algorithms: simulation, verification, transformation";

  py::register_exception<GraphError>(m, "GraphError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_RuntimeError);
  py::register_exception<StateSpaceTooLarge>(m, "StateSpaceTooLarge", PyExc_RuntimeError);

  py::class_<Graph>(m, "Graph")
      .def(py::init([](int n, const std::vector<Edge>& edges) { return Graph::build(n, edges); }),
           py::arg("n"), py::arg("edges"))
      .def_property_readonly("n", &Graph::size)
      .def_property_readonly("edges", &Graph::edges)
      .def("neighbors", [](const Graph& g, ProcessId i) { return to_vector(g.neighbors(i)); })
      .def("two_hop_exact", [](const Graph& g, ProcessId i) { return to_vector(g.two_hop_exact(i)); })
      .def("within_two", [](const Graph& g, ProcessId i) { return to_vector(g.within_two(i)); })
      .def("connected", &Graph::connected)
      .def("to_json", [](const Graph& g) { return to_python(graph_to_json(g)); })
      .def("__eq__", [](const Graph& a, const Graph& b) { return a == b; })
      .def("__repr__", [](const Graph& g) { return "Graph(" + describe(g) + ")"; });

  m.def("generate", [](const std::string& d) { return generate(parse_recipe(d)); },
        py::arg("descriptor"), "Build a graph from a descriptor such as 'cycle:8' or 'gnp:20:0.2:seed=7'.");

  m.def("run", &run, py::arg("alg"), py::arg("graph"), py::arg("daemon") = "random:0",
        py::arg("init") = "all-bottom", py::arg("max_moves") = py::none(),
        "Execute under a central daemon and return the trace and verdicts.");

  m.def("verify", &verify_py, py::arg("alg"), py::arg("graph"), py::arg("cap") = kDefaultStateCap,
        "Exhaustive closure and convergence check.");

  m.def("transform", &transform, py::arg("alg"), py::arg("graph"), py::arg("K") = 2,
        py::arg("seed") = 0, py::arg("start_phase") = 1, py::arg("init") = py::none(),
        py::arg("n_prime") = py::none(), py::arg("max_cycles") = 100'000,
        "Run the synchronous message-passing simulation and return its metrics.");

  m.def(
      "winner_probability",
      [](const py::object& graph, const std::vector<bool>& enabled, int K, std::int64_t trials,
         std::uint64_t seed, std::optional<int> n_prime) {
        return winner_probability_estimate(as_graph(graph), enabled, K, trials, seed, n_prime);
      },
      py::arg("graph"), py::arg("enabled"), py::arg("K") = 2, py::arg("trials") = 10'000,
      py::arg("seed") = 0, py::arg("n_prime") = py::none(),
      "Fraction of voting rounds in which at least one process executes.");

  m.def(
      "enabled_rules",
      [](const std::string& alg_selector, const py::object& graph, const py::object& states,
         ProcessId i) {
        const auto alg = parse_algorithm(alg_selector);
        const Graph g = as_graph(graph);
        const Json doc = Json::parse(py::module_::import("json").attr("dumps")(states).cast<std::string>());
        return enabled_rules(*alg, g, configuration_from_json(*alg, g, doc), i);
      },
      py::arg("alg"), py::arg("graph"), py::arg("states"), py::arg("i"));
}
