#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "mplp/bench.hpp"
#include "mplp/domains/explicit_graph.hpp"
#include "mplp/domains/grid_nav.hpp"
#include "mplp/errors.hpp"
#include "mplp/planners.hpp"

namespace py = pybind11;
using namespace mplp;

namespace {

using Edge = std::tuple<std::uint32_t, std::uint32_t, Cost, Cost, double>;

std::vector<GraphEdgeSpec> to_specs(const std::vector<Edge>& edges) {
  std::vector<GraphEdgeSpec> out;
  out.reserve(edges.size());
  for (const auto& [from, to, lazy, truth, delay] : edges) out.push_back({from, to, lazy, truth, delay});
  return out;
}

py::tuple transition(const Transition& t) { return py::make_tuple(t.successor, t.cost); }

ActionId action(std::uint32_t a) { return ActionId{a}; }

std::vector<std::uint32_t> action_list(const std::vector<ActionId>& actions) {
  std::vector<std::uint32_t> out;
  for (ActionId a : actions) out.push_back(static_cast<std::uint32_t>(a));
  return out;
}

}  // namespace

PYBIND11_MODULE(_mplp, m) {
  m.doc() = "Parallel lazy planning: MPLP, lazy and parallel baselines, domains and benchmark helpers";

  // Base first: pybind11 tries translators newest first.
  auto& base = py::register_exception<Error>(m, "Error");
  py::register_exception<DuplicateEdge>(m, "DuplicateEdge", base.ptr());
  py::register_exception<UnknownEdge>(m, "UnknownEdge", base.ptr());
  py::register_exception<AlreadyEvaluated>(m, "AlreadyEvaluated", base.ptr());
  py::register_exception<InvalidTransition>(m, "InvalidTransition", base.ptr());
  py::register_exception<SuccessorMismatch>(m, "SuccessorMismatch", base.ptr());
  py::register_exception<MalformedPath>(m, "MalformedPath", base.ptr());
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<DomainContractViolation>(m, "DomainContractViolation", base.ptr());
  py::register_exception<GraphTooLarge>(m, "GraphTooLarge", base.ptr());
  py::register_exception<DimensionMismatch>(m, "DimensionMismatch", base.ptr());
  py::register_exception<ContractViolation>(m, "ContractViolation", base.ptr());
  py::register_exception<NoFreeStart>(m, "NoFreeStart", base.ptr());
  py::register_exception<IoError>(m, "IoError", base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.attr("INF") = kInfiniteCost;

  // ---- domains ----
  py::class_<Domain, std::shared_ptr<Domain>>(m, "Domain")
      .def("start", &Domain::start)
      .def("is_goal", &Domain::is_goal)
      .def("heuristic", &Domain::heuristic)
      .def("action_count", &Domain::action_count)
      .def("lazy_successor",
           [](const Domain& d, StatePayload s, std::uint32_t a) { return transition(d.lazy_successor(s, action(a))); })
      .def("true_evaluate",
           [](const Domain& d, StatePayload s, std::uint32_t a) { return transition(d.true_evaluate(s, action(a))); })
      .def("state_space_bound", &Domain::state_space_bound);

  py::class_<ExplicitGraphDomain, Domain, std::shared_ptr<ExplicitGraphDomain>>(m, "ExplicitGraphDomain")
      .def(py::init([](std::size_t n, std::uint32_t start, std::vector<std::uint32_t> goals,
                       const std::vector<Edge>& edges, std::vector<Cost> heuristic) {
             return std::make_shared<ExplicitGraphDomain>(n, start, std::move(goals), to_specs(edges),
                                                          std::move(heuristic));
           }),
           py::arg("num_vertices"), py::arg("start"), py::arg("goals"), py::arg("edges"),
           py::arg("heuristic") = std::vector<Cost>{},
           "Edges are (from, to, lazy_cost, true_cost, eval_delay_ms) tuples.")
      .def_property_readonly("vertex_count", &ExplicitGraphDomain::vertex_count)
      .def_property_readonly("goals", &ExplicitGraphDomain::goals)
      .def_property_readonly("edges",
                             [](const ExplicitGraphDomain& d) {
                               std::vector<Edge> out;
                               for (const auto& e : d.edges()) {
                                 out.emplace_back(e.from, e.to, e.lazy_cost, e.true_cost, e.eval_delay_ms);
                               }
                               return out;
                             })
      .def("without_delay",
           [](const ExplicitGraphDomain& d) { return std::make_shared<ExplicitGraphDomain>(d.without_delay()); })
      .def("to_text", [](const ExplicitGraphDomain& d) { return format_graph(d); });

  m.def("parse_graph", [](const std::string& text) {
    std::istringstream in(text);
    return std::make_shared<ExplicitGraphDomain>(parse_graph(in));
  });
  m.def("load_graph", [](const std::filesystem::path& p) { return std::make_shared<ExplicitGraphDomain>(load_graph(p)); });

  py::class_<RandomGraphParams>(m, "RandomGraphParams")
      .def(py::init<>())
      .def_readwrite("min_vertices", &RandomGraphParams::min_vertices)
      .def_readwrite("max_vertices", &RandomGraphParams::max_vertices)
      .def_readwrite("edge_density", &RandomGraphParams::edge_density)
      .def_readwrite("lazy_low", &RandomGraphParams::lazy_low)
      .def_readwrite("lazy_high", &RandomGraphParams::lazy_high)
      .def_readwrite("infeasible_fraction", &RandomGraphParams::infeasible_fraction)
      .def_readwrite("min_true_cost", &RandomGraphParams::min_true_cost)
      .def_readwrite("max_true_cost", &RandomGraphParams::max_true_cost)
      .def_readwrite("heuristic_scale_low", &RandomGraphParams::heuristic_scale_low)
      .def_readwrite("use_heuristic", &RandomGraphParams::use_heuristic);
  m.def(
      "random_graph",
      [](std::uint64_t seed, const RandomGraphParams& p) {
        return std::make_shared<ExplicitGraphDomain>(random_graph(p, seed));
      },
      py::arg("seed"), py::arg("params") = RandomGraphParams{});

  py::class_<OccupancyGrid>(m, "OccupancyGrid")
      .def_property_readonly("width", &OccupancyGrid::width)
      .def_property_readonly("height", &OccupancyGrid::height)
      .def_property_readonly("resolution", &OccupancyGrid::resolution)
      .def("free", &OccupancyGrid::free)
      .def("blocked_count", &OccupancyGrid::blocked_count)
      .def("free_count", &OccupancyGrid::free_count)
      .def("to_text", [](const OccupancyGrid& g) { return format_map(g); });
  m.def("parse_map", [](const std::string& text) {
    std::istringstream in(text);
    return parse_map(in);
  });
  m.def("load_map", &load_map);
  m.def("random_map", &random_map, py::arg("width"), py::arg("height"), py::arg("density"), py::arg("seed"),
        py::arg("resolution") = 0.05);

  py::class_<GridPose>(m, "GridPose")
      .def(py::init<int, int, int>(), py::arg("x"), py::arg("y"), py::arg("theta") = 0)
      .def_readwrite("x", &GridPose::x)
      .def_readwrite("y", &GridPose::y)
      .def_readwrite("theta", &GridPose::theta)
      .def("__eq__", [](const GridPose& a, const GridPose& b) { return a == b; })
      .def("__repr__", [](const GridPose& p) {
        return "GridPose(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ", " + std::to_string(p.theta) + ")";
      });

  py::class_<GridNavParams>(m, "GridNavParams")
      .def(py::init([](double d_cc, int theta_bins, double eval_delay_s) {
             return GridNavParams{d_cc, theta_bins, eval_delay_s};
           }),
           py::arg("d_cc") = 0.0125, py::arg("theta_bins") = 16, py::arg("eval_delay_s") = 0.0)
      .def_readwrite("d_cc", &GridNavParams::d_cc)
      .def_readwrite("theta_bins", &GridNavParams::theta_bins)
      .def_readwrite("eval_delay_s", &GridNavParams::eval_delay_s);

  py::class_<GridNavDomain, Domain, std::shared_ptr<GridNavDomain>>(m, "GridNavDomain")
      .def(py::init([](const OccupancyGrid& grid, GridPose start, int gx, int gy, GridNavParams params) {
             return std::make_shared<GridNavDomain>(grid, start, gx, gy, params);
           }),
           py::arg("grid"), py::arg("start"), py::arg("goal_x"), py::arg("goal_y"),
           py::arg("params") = GridNavParams{})
      .def_property_readonly("primitive_names",
                             [](const GridNavDomain& d) {
                               std::vector<std::string> names;
                               for (const auto& p : d.primitives()) names.push_back(p.name);
                               return names;
                             })
      .def("collision_checks", &GridNavDomain::collision_checks)
      .def("with_params",
           [](const GridNavDomain& d, GridNavParams p) { return std::make_shared<GridNavDomain>(d.with_params(p)); })
      .def_static("encode", &GridNavDomain::encode)
      .def_static("decode", &GridNavDomain::decode);

  // ---- planners ----
  py::enum_<MonitorMode>(m, "MonitorMode").value("Strict", MonitorMode::Strict).value("Diversify", MonitorMode::Diversify);
  py::enum_<PlanOutcome>(m, "PlanOutcome")
      .value("Solved", PlanOutcome::Solved)
      .value("NoPath", PlanOutcome::NoPath)
      .value("Timeout", PlanOutcome::Timeout);

  py::class_<PlannerConfig>(m, "PlannerConfig")
      .def(py::init([](double eps_h, int n_threads, MonitorMode mode, double kappa, double time_limit_s,
                       std::uint64_t seed, bool evaluate_all) {
             return PlannerConfig{eps_h, n_threads, mode, kappa, time_limit_s, seed, evaluate_all};
           }),
           py::arg("eps_h") = 1.0, py::arg("n_threads") = 3, py::arg("mode") = MonitorMode::Strict,
           py::arg("kappa") = kInfiniteCost, py::arg("time_limit_s") = kInfiniteCost, py::arg("seed") = 0,
           py::arg("evaluate_all") = false)
      .def_readwrite("eps_h", &PlannerConfig::eps_h)
      .def_readwrite("n_threads", &PlannerConfig::n_threads)
      .def_readwrite("mode", &PlannerConfig::mode)
      .def_readwrite("kappa", &PlannerConfig::kappa)
      .def_readwrite("time_limit_s", &PlannerConfig::time_limit_s)
      .def_readwrite("seed", &PlannerConfig::seed)
      .def_readwrite("evaluate_all", &PlannerConfig::evaluate_all);

  py::class_<PlanStats>(m, "PlanStats")
      .def_readonly("wall_time_s", &PlanStats::wall_time_s)
      .def_readonly("searches", &PlanStats::searches)
      .def_readonly("expansions", &PlanStats::expansions)
      .def_readonly("edges_evaluated", &PlanStats::edges_evaluated)
      .def_readonly("edges_discovered", &PlanStats::edges_discovered)
      .def_readonly("goal_g_trace", &PlanStats::goal_g_trace)
      .def_readonly("max_evaluations_per_edge", &PlanStats::max_evaluations_per_edge)
      .def_readonly("lifecycle_consistent", &PlanStats::lifecycle_consistent)
      .def_readonly("fully_evaluated", &PlanStats::fully_evaluated)
      .def_readonly("paths_registered", &PlanStats::paths_registered)
      .def_readonly("evaluation_failures", &PlanStats::evaluation_failures);

  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("outcome", &PlanResult::outcome)
      .def_readonly("path", &PlanResult::path)
      .def_property_readonly("actions", [](const PlanResult& r) { return action_list(r.actions); })
      .def_readonly("true_cost", &PlanResult::true_cost)
      .def_readonly("stats", &PlanResult::stats)
      .def_property_readonly("solved", &PlanResult::solved);

  const auto release = py::call_guard<py::gil_scoped_release>();
  m.def("plan_mplp", &plan_mplp, py::arg("domain"), py::arg("config") = PlannerConfig{}, release);
  m.def("plan_wastar", &plan_wastar, py::arg("domain"), py::arg("w") = 1.0, py::arg("time_limit_s") = kInfiniteCost,
        release);
  m.def("plan_pwastar", &plan_pwastar, py::arg("domain"), py::arg("w") = 1.0, py::arg("n_workers") = 2,
        py::arg("time_limit_s") = kInfiniteCost, release);
  m.def("plan_lwastar", &plan_lwastar, py::arg("domain"), py::arg("w") = 1.0, py::arg("time_limit_s") = kInfiniteCost,
        release);
  m.def("plan_lsp", &plan_lsp, py::arg("domain"), py::arg("w") = 1.0, py::arg("time_limit_s") = kInfiniteCost,
        release);
  m.def("optimal_cost_oracle", &optimal_cost_oracle, py::arg("domain"), py::arg("state_cap") = kDefaultOracleCap,
        release);
  m.def(
      "path_true_cost",
      [](const Domain& d, const std::vector<std::uint32_t>& actions) {
        std::vector<ActionId> ids;
        for (auto a : actions) ids.push_back(action(a));
        return path_true_cost(d, ids);
      },
      py::arg("domain"), py::arg("actions"));
  m.def("worker_count_for", &worker_count_for);

  // ---- bench ----
  py::enum_<DomainKind>(m, "DomainKind").value("Grid", DomainKind::Grid).value("Graph", DomainKind::Graph);
  py::enum_<PlannerId>(m, "PlannerId")
      .value("Mplp", PlannerId::Mplp)
      .value("Wastar", PlannerId::Wastar)
      .value("Lwastar", PlannerId::Lwastar)
      .value("Lsp", PlannerId::Lsp)
      .value("Pwastar", PlannerId::Pwastar);

  py::class_<TrialSpec>(m, "TrialSpec")
      .def(py::init<>())
      .def_readwrite("domain", &TrialSpec::domain)
      .def_readwrite("map_path", &TrialSpec::map_path)
      .def_readwrite("graph_path", &TrialSpec::graph_path)
      .def_readwrite("map_width", &TrialSpec::map_width)
      .def_readwrite("map_height", &TrialSpec::map_height)
      .def_readwrite("map_density", &TrialSpec::map_density)
      .def_readwrite("map_seed", &TrialSpec::map_seed)
      .def_readwrite("map_resolution", &TrialSpec::map_resolution)
      .def_readwrite("theta_bins", &TrialSpec::theta_bins)
      .def_readwrite("planner", &TrialSpec::planner)
      .def_readwrite("eps_h", &TrialSpec::eps_h)
      .def_readwrite("n_threads", &TrialSpec::n_threads)
      .def_readwrite("d_cc", &TrialSpec::d_cc)
      .def_readwrite("eval_delay_ms", &TrialSpec::eval_delay_ms)
      .def_readwrite("trials", &TrialSpec::trials)
      .def_readwrite("seed", &TrialSpec::seed)
      .def_readwrite("mode", &TrialSpec::mode)
      .def_readwrite("kappa", &TrialSpec::kappa)
      .def_readwrite("time_limit_s", &TrialSpec::time_limit_s)
      .def_readwrite("oracle_cap", &TrialSpec::oracle_cap)
      .def_readwrite("min_goal_distance", &TrialSpec::min_goal_distance)
      .def_readwrite("max_goal_distance", &TrialSpec::max_goal_distance);

  py::class_<TrialRow>(m, "TrialRow")
      .def_readonly("trial_id", &TrialRow::trial_id)
      .def_readonly("planner", &TrialRow::planner)
      .def_readonly("eps_h", &TrialRow::eps_h)
      .def_readonly("n_threads", &TrialRow::n_threads)
      .def_readonly("d_cc", &TrialRow::d_cc)
      .def_readonly("wall_time_s", &TrialRow::wall_time_s)
      .def_readonly("solution_cost", &TrialRow::solution_cost)
      .def_readonly("optimal_cost", &TrialRow::optimal_cost)
      .def_readonly("bound_ok", &TrialRow::bound_ok)
      .def_readonly("edges_evaluated", &TrialRow::edges_evaluated)
      .def_readonly("searches", &TrialRow::searches)
      .def_readonly("outcome", &TrialRow::outcome)
      .def("__eq__", [](const TrialRow& a, const TrialRow& b) { return a == b; });

  m.def("run_trials", &run_trials, py::arg("spec"), release);
  m.def("format_csv", &format_csv);
  m.def("format_json", &format_json);
  m.def("parse_csv", [](const std::string& text) {
    std::istringstream in(text);
    return parse_csv(in);
  });
  m.def("trial_row_fields", &trial_row_fields);
  m.def("speedup", &speedup, py::arg("baseline_s"), py::arg("planner_s"));
}
