#include "mplp/bench.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <deque>
#include <fstream>
#include <map>
#include <random>
#include <sstream>
#include <tuple>
#include <unordered_set>

#include <json.hpp>

#include "mplp/domains/explicit_graph.hpp"
#include "mplp/domains/grid_nav.hpp"
#include "mplp/errors.hpp"

namespace mplp {

const char* to_string(DomainKind d) { return d == DomainKind::Grid ? "grid" : "graph"; }

const char* to_string(PlannerId p) {
  switch (p) {
    case PlannerId::Mplp: return "mplp";
    case PlannerId::Wastar: return "wastar";
    case PlannerId::Lwastar: return "lwastar";
    case PlannerId::Lsp: return "lsp";
    case PlannerId::Pwastar: return "pwastar";
  }
  return "?";
}

DomainKind parse_domain_kind(const std::string& s) {
  if (s == "grid") return DomainKind::Grid;
  if (s == "graph") return DomainKind::Graph;
  throw ConfigError("unknown domain '" + s + "'");
}

PlannerId parse_planner(const std::string& s) {
  for (PlannerId p : {PlannerId::Mplp, PlannerId::Wastar, PlannerId::Lwastar, PlannerId::Lsp, PlannerId::Pwastar}) {
    if (s == to_string(p)) return p;
  }
  throw ConfigError("unknown planner '" + s + "'");
}

MonitorMode parse_mode(const std::string& s) {
  if (s == "strict") return MonitorMode::Strict;
  if (s == "diversify") return MonitorMode::Diversify;
  throw ConfigError("unknown mode '" + s + "'");
}

ReportFormat parse_format(const std::string& s) {
  if (s == "csv") return ReportFormat::Csv;
  if (s == "json") return ReportFormat::Json;
  throw ConfigError("unknown format '" + s + "'");
}

double parse_kappa(const std::string& s) {
  if (s == "inf") return kInfiniteCost;
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0' || !(v >= 1.0)) throw ConfigError("kappa must be 'inf' or a number >= 1");
  return v;
}

void validate(const TrialSpec& s) {
  if (s.trials < 1) throw ConfigError("trials must be >= 1");
  if (!(s.eps_h >= 1.0) || !std::isfinite(s.eps_h)) throw ConfigError("eps_h must be finite and >= 1");
  if (s.n_threads < 1) throw ConfigError("thread count must be positive");
  if (s.planner == PlannerId::Mplp && s.n_threads < 3) throw ConfigError("MPLP needs a thread budget of at least 3");
  if (s.d_cc < 0 || s.eval_delay_ms < 0) throw ConfigError("d_cc and delay must be non-negative");
  if (!(s.time_limit_s > 0)) throw ConfigError("time limit must be positive");
  if (s.domain == DomainKind::Graph) {
    if (s.graph_path.empty()) throw ConfigError("graph domain needs --graph");
    if (!std::filesystem::exists(s.graph_path)) throw IoError("graph file not found: " + s.graph_path.string());
  } else if (!s.map_path.empty() && !std::filesystem::exists(s.map_path)) {
    throw IoError("map file not found: " + s.map_path.string());
  }
}

const std::vector<std::string>& trial_row_fields() {
  static const std::vector<std::string> fields = {
      "trial_id",      "planner",      "eps_h",    "n_threads",       "d_cc",     "wall_time_s",
      "solution_cost", "optimal_cost", "bound_ok", "edges_evaluated", "searches", "outcome"};
  return fields;
}

namespace {

constexpr int kSamplingAttempts = 1000;

/// Whether the goal region is reachable over feasible true edges.
bool reachable(const Domain& domain) {
  std::unordered_set<StatePayload> seen{domain.start()};
  std::deque<StatePayload> frontier{domain.start()};
  while (!frontier.empty()) {
    const StatePayload s = frontier.front();
    frontier.pop_front();
    if (domain.is_goal(s)) return true;
    const std::size_t actions = domain.action_count(s);
    for (std::size_t a = 0; a < actions; ++a) {
      const Transition t = domain.true_evaluate(s, ActionId{static_cast<std::uint32_t>(a)});
      if (t.successor && is_finite(t.cost) && seen.insert(*t.successor).second) frontier.push_back(*t.successor);
    }
  }
  return false;
}

bool oracle_enabled(const Domain& domain, std::size_t cap) {
  const auto bound = domain.state_space_bound();
  return bound && *bound <= cap;
}

TrialInstance make_grid_instance(const TrialSpec& spec, int trial) {
  const OccupancyGrid grid = spec.map_path.empty()
                                 ? random_map(spec.map_width, spec.map_height, spec.map_density, spec.map_seed,
                                              spec.map_resolution)
                                 : load_map(spec.map_path);
  const double d_cc = spec.d_cc > 0 ? spec.d_cc : grid.resolution() / 4;

  std::vector<std::pair<int, int>> free_cells;
  for (int y = 0; y < grid.height(); ++y) {
    for (int x = 0; x < grid.width(); ++x) {
      if (grid.free(x, y)) free_cells.emplace_back(x, y);
    }
  }
  if (free_cells.size() < 2) throw NoFreeStart("map has fewer than two free cells");

  std::seed_seq seq{static_cast<std::uint32_t>(spec.seed), static_cast<std::uint32_t>(spec.seed >> 32),
                    static_cast<std::uint32_t>(trial)};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<std::size_t> pick(0, free_cells.size() - 1);
  std::uniform_int_distribution<int> heading(0, spec.theta_bins - 1);

  for (int attempt = 0; attempt < kSamplingAttempts; ++attempt) {
    const auto [sx, sy] = free_cells[pick(rng)];
    const int theta = heading(rng);
    const auto [gx, gy] = free_cells[pick(rng)];
    if (sx == gx && sy == gy) continue;
    const double dist = std::hypot(sx - gx, sy - gy);
    if (spec.min_goal_distance > 0 && dist < spec.min_goal_distance) continue;
    if (spec.max_goal_distance > 0 && dist > spec.max_goal_distance) continue;

    auto oracle_domain = std::make_shared<GridNavDomain>(grid, GridPose{sx, sy, theta}, gx, gy,
                                                         GridNavParams{d_cc, spec.theta_bins, 0.0});
    TrialInstance inst;
    inst.d_cc = d_cc;
    if (oracle_enabled(*oracle_domain, spec.oracle_cap)) {
      const Cost opt = optimal_cost_oracle(*oracle_domain, spec.oracle_cap);
      if (!is_finite(opt)) continue;
      inst.optimal_cost = opt;
    } else if (!reachable(*oracle_domain)) {
      continue;
    }
    inst.domain = std::make_shared<GridNavDomain>(
        oracle_domain->with_params(GridNavParams{d_cc, spec.theta_bins, spec.eval_delay_ms / 1000.0}));
    inst.oracle_domain = std::move(oracle_domain);
    return inst;
  }
  throw NoFreeStart("no reachable start/goal pair after " + std::to_string(kSamplingAttempts) + " attempts");
}

TrialInstance make_graph_instance(const TrialSpec& spec) {
  const ExplicitGraphDomain loaded = load_graph(spec.graph_path);
  std::vector<GraphEdgeSpec> edges = loaded.edges();
  if (spec.eval_delay_ms > 0) {
    for (auto& e : edges) e.eval_delay_ms = spec.eval_delay_ms;
  }
  auto domain = std::make_shared<ExplicitGraphDomain>(loaded.vertex_count(), static_cast<std::uint32_t>(loaded.start()),
                                                      loaded.goals(), std::move(edges), loaded.heuristic_values());
  TrialInstance inst;
  inst.d_cc = spec.d_cc;
  inst.oracle_domain = std::make_shared<ExplicitGraphDomain>(domain->without_delay());
  if (oracle_enabled(*inst.oracle_domain, spec.oracle_cap)) {
    inst.optimal_cost = optimal_cost_oracle(*inst.oracle_domain, spec.oracle_cap);
  }
  inst.domain = std::move(domain);
  return inst;
}

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || *end != '\0') throw ParseError(line, "invalid number '" + s + "'");
  return v;
}

long long parse_integer(const std::string& s, std::size_t line) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) throw ParseError(line, "invalid integer '" + s + "'");
  return v;
}

nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

}  // namespace

TrialInstance make_trial_instance(const TrialSpec& spec, int trial) {
  return spec.domain == DomainKind::Grid ? make_grid_instance(spec, trial) : make_graph_instance(spec);
}

PlanResult run_planner(const TrialSpec& spec, const Domain& domain) {
  const auto t0 = std::chrono::steady_clock::now();
  PlanResult r;
  switch (spec.planner) {
    case PlannerId::Mplp: {
      PlannerConfig c;
      c.eps_h = spec.eps_h;
      c.n_threads = spec.n_threads;
      c.mode = spec.mode;
      c.kappa = spec.kappa;
      c.time_limit_s = spec.time_limit_s;
      c.seed = spec.seed;
      r = plan_mplp(domain, c);
      break;
    }
    case PlannerId::Wastar: r = plan_wastar(domain, spec.eps_h, spec.time_limit_s); break;
    case PlannerId::Lwastar: r = plan_lwastar(domain, spec.eps_h, spec.time_limit_s); break;
    case PlannerId::Lsp: r = plan_lsp(domain, spec.eps_h, spec.time_limit_s); break;
    case PlannerId::Pwastar:
      r = plan_pwastar(domain, spec.eps_h, static_cast<std::size_t>(spec.n_threads), spec.time_limit_s);
      break;
  }
  r.stats.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

bool bound_satisfied(const PlanResult& result, std::optional<Cost> optimal, double eps_h) {
  if (!optimal || result.outcome == PlanOutcome::Timeout) return true;
  if (result.outcome == PlanOutcome::NoPath) return !is_finite(*optimal);
  return is_finite(*optimal) && result.true_cost <= eps_h * *optimal;
}

TrialRow make_row(const TrialSpec& spec, int trial, const TrialInstance& instance, const PlanResult& result) {
  TrialRow row;
  row.trial_id = trial;
  row.planner = to_string(spec.planner);
  row.eps_h = spec.eps_h;
  row.n_threads = spec.n_threads;
  row.d_cc = instance.d_cc;
  row.wall_time_s = result.stats.wall_time_s;
  row.solution_cost = result.solved() ? result.true_cost : kInfiniteCost;
  row.optimal_cost = instance.optimal_cost;
  row.bound_ok = bound_satisfied(result, instance.optimal_cost, spec.eps_h);
  row.edges_evaluated = result.stats.edges_evaluated;
  row.searches = result.stats.searches;
  row.outcome = to_string(result.outcome);
  return row;
}

std::vector<TrialRow> run_trials(const TrialSpec& spec) {
  validate(spec);
  std::vector<TrialRow> rows;
  rows.reserve(static_cast<std::size_t>(spec.trials));
  for (int t = 0; t < spec.trials; ++t) {
    const TrialInstance inst = make_trial_instance(spec, t);
    const PlanResult r = run_planner(spec, *inst.domain);
    rows.push_back(make_row(spec, t, inst, r));
  }
  return rows;
}

std::string format_csv(const std::vector<TrialRow>& rows) {
  std::ostringstream os;
  const auto& fields = trial_row_fields();
  for (std::size_t i = 0; i < fields.size(); ++i) os << (i ? "," : "") << fields[i];
  os << '\n';
  for (const TrialRow& r : rows) {
    os << r.trial_id << ',' << r.planner << ',' << format_double(r.eps_h) << ',' << r.n_threads << ','
       << format_double(r.d_cc) << ',' << format_double(r.wall_time_s) << ',' << format_double(r.solution_cost) << ','
       << (r.optimal_cost ? format_double(*r.optimal_cost) : "") << ',' << (r.bound_ok ? "true" : "false") << ','
       << r.edges_evaluated << ',' << r.searches << ',' << r.outcome << '\n';
  }
  return os.str();
}

std::vector<TrialRow> parse_csv(std::istream& in) {
  std::string line;
  std::size_t lineno = 1;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  std::string expected;
  for (const auto& f : trial_row_fields()) expected += (expected.empty() ? "" : ",") + f;
  if (line != expected) throw ParseError(1, "unexpected header");

  std::vector<TrialRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string c; std::getline(ss, c, ',');) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    if (cells.size() != trial_row_fields().size()) throw ParseError(lineno, "wrong number of columns");
    TrialRow r;
    r.trial_id = static_cast<int>(parse_integer(cells[0], lineno));
    r.planner = cells[1];
    r.eps_h = parse_double(cells[2], lineno);
    r.n_threads = static_cast<int>(parse_integer(cells[3], lineno));
    r.d_cc = parse_double(cells[4], lineno);
    r.wall_time_s = parse_double(cells[5], lineno);
    r.solution_cost = parse_double(cells[6], lineno);
    if (!cells[7].empty()) r.optimal_cost = parse_double(cells[7], lineno);
    if (cells[8] != "true" && cells[8] != "false") throw ParseError(lineno, "bound_ok must be true or false");
    r.bound_ok = cells[8] == "true";
    r.edges_evaluated = static_cast<std::size_t>(parse_integer(cells[9], lineno));
    r.searches = static_cast<std::size_t>(parse_integer(cells[10], lineno));
    r.outcome = cells[11];
    rows.push_back(std::move(r));
  }
  return rows;
}

double speedup(double baseline_s, double planner_s) { return baseline_s / planner_s; }

std::string format_json(const std::vector<TrialRow>& rows) {
  using nlohmann::json;
  json out;
  out["rows"] = json::array();
  for (const TrialRow& r : rows) {
    out["rows"].push_back({{"trial_id", r.trial_id},
                           {"planner", r.planner},
                           {"eps_h", r.eps_h},
                           {"n_threads", r.n_threads},
                           {"d_cc", r.d_cc},
                           {"wall_time_s", r.wall_time_s},
                           {"solution_cost", json_number(r.solution_cost)},
                           {"optimal_cost", r.optimal_cost ? json_number(*r.optimal_cost) : json(nullptr)},
                           {"bound_ok", r.bound_ok},
                           {"edges_evaluated", r.edges_evaluated},
                           {"searches", r.searches},
                           {"outcome", r.outcome}});
  }

  using GroupKey = std::tuple<std::string, double, int, double>;
  struct Sum {
    double wall = 0;
    int n = 0;
  };
  std::map<GroupKey, Sum> groups;
  std::map<std::pair<double, double>, Sum> wastar;
  for (const TrialRow& r : rows) {
    auto& g = groups[{r.planner, r.eps_h, r.n_threads, r.d_cc}];
    g.wall += r.wall_time_s;
    ++g.n;
    if (r.planner == "wastar") {
      auto& b = wastar[{r.eps_h, r.d_cc}];
      b.wall += r.wall_time_s;
      ++b.n;
    }
  }
  out["aggregate"] = json::array();
  for (const auto& [k, s] : groups) {
    const auto& [planner, eps, threads, dcc] = k;
    const double mean = s.wall / s.n;
    json a = {{"planner", planner}, {"eps_h", eps}, {"n_threads", threads}, {"d_cc", dcc},
              {"trials", s.n},      {"mean_wall_time_s", mean}};
    if (auto it = wastar.find({eps, dcc}); it != wastar.end()) {
      a["speedup_vs_wastar"] = speedup(it->second.wall / it->second.n, mean);
    } else {
      a["speedup_vs_wastar"] = nullptr;
    }
    out["aggregate"].push_back(std::move(a));
  }
  return out.dump(2) + "\n";
}

void emit_report(const std::vector<TrialRow>& rows, ReportFormat format, const std::filesystem::path& out_path) {
  if (rows.empty()) throw ContractViolation("no trial rows to report");
  const std::string text = format == ReportFormat::Csv ? format_csv(rows) : format_json(rows);
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write report to " + out_path.string());
  out << text;
  if (!out) throw IoError("failed writing report to " + out_path.string());
}

}  // namespace mplp
