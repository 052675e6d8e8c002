// Benchmark driver: `plan` solves one instance, `bench` sweeps trials and
// writes a CSV or JSON report. Exit code 1 on any bound violation or error.

#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "mplp/bench.hpp"
#include "mplp/errors.hpp"

namespace {

struct CliOptions {
  std::string domain = "grid";
  std::string planner = "mplp";
  std::string mode = "diversify";
  std::string kappa = "inf";
  std::string format = "csv";
  std::string out;
};

void add_common(CLI::App& cmd, mplp::TrialSpec& spec, CliOptions& o) {
  cmd.add_option("--domain", o.domain, "grid or graph")->check(CLI::IsMember({"grid", "graph"}));
  cmd.add_option("--map", spec.map_path, "map file (grid); generated when omitted");
  cmd.add_option("--graph", spec.graph_path, "edge-list file (graph)");
  cmd.add_option("--planner", o.planner, "mplp, wastar, lwastar, lsp or pwastar")
      ->check(CLI::IsMember({"mplp", "wastar", "lwastar", "lsp", "pwastar"}));
  cmd.add_option("--eps", spec.eps_h, "heuristic weight (>= 1)");
  cmd.add_option("--threads", spec.n_threads, "MPLP thread budget or PWA* workers");
  cmd.add_option("--dcc", spec.d_cc, "collision-check spacing in meters (default: resolution / 4)");
  cmd.add_option("--delay-ms", spec.eval_delay_ms, "grid: delay per collision check; graph: per edge override");
  cmd.add_option("--seed", spec.seed, "trial seed");
  cmd.add_option("--mode", o.mode, "strict or diversify")->check(CLI::IsMember({"strict", "diversify"}));
  cmd.add_option("--kappa", o.kappa, "diversification factor: inf or a number >= 1");
  cmd.add_option("--time-limit", spec.time_limit_s, "seconds per planner call");
  cmd.add_option("--out", o.out, "report path (stdout when omitted)");
  cmd.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd.add_option("--width", spec.map_width, "generated map width");
  cmd.add_option("--height", spec.map_height, "generated map height");
  cmd.add_option("--density", spec.map_density, "generated map obstacle density");
  cmd.add_option("--map-seed", spec.map_seed, "generated map seed");
  cmd.add_option("--min-dist", spec.min_goal_distance, "minimum start-goal distance in cells");
  cmd.add_option("--max-dist", spec.max_goal_distance, "maximum start-goal distance in cells");
  cmd.add_option("--oracle-cap", spec.oracle_cap, "largest state space the oracle enumerates");
}

void finish_spec(mplp::TrialSpec& spec, const CliOptions& o) {
  spec.domain = mplp::parse_domain_kind(o.domain);
  spec.planner = mplp::parse_planner(o.planner);
  spec.mode = mplp::parse_mode(o.mode);
  spec.kappa = mplp::parse_kappa(o.kappa);
  mplp::validate(spec);
}

void write_rows(const std::vector<mplp::TrialRow>& rows, const CliOptions& o) {
  const auto format = mplp::parse_format(o.format);
  if (o.out.empty()) {
    std::cout << (format == mplp::ReportFormat::Csv ? mplp::format_csv(rows) : mplp::format_json(rows));
  } else {
    mplp::emit_report(rows, format, o.out);
  }
}

bool all_bounds_ok(const std::vector<mplp::TrialRow>& rows) {
  bool ok = true;
  for (const auto& r : rows) {
    if (!r.bound_ok) {
      std::cerr << "bound violation: trial " << r.trial_id << " planner " << r.planner << " cost " << r.solution_cost
                << " optimum " << (r.optimal_cost ? std::to_string(*r.optimal_cost) : "?") << '\n';
      ok = false;
    }
  }
  return ok;
}

int run_plan(mplp::TrialSpec spec, const CliOptions& o) {
  spec.trials = 1;
  finish_spec(spec, o);
  const mplp::TrialInstance inst = mplp::make_trial_instance(spec, 0);
  const mplp::PlanResult r = mplp::run_planner(spec, *inst.domain);
  const mplp::TrialRow row = mplp::make_row(spec, 0, inst, r);

  nlohmann::json j;
  j["outcome"] = mplp::to_string(r.outcome);
  j["planner"] = row.planner;
  j["solution_cost"] = r.solved() ? nlohmann::json(r.true_cost) : nlohmann::json(nullptr);
  j["optimal_cost"] =
      inst.optimal_cost && mplp::is_finite(*inst.optimal_cost) ? nlohmann::json(*inst.optimal_cost) : nlohmann::json(nullptr);
  j["bound_ok"] = row.bound_ok;
  j["wall_time_s"] = r.stats.wall_time_s;
  j["searches"] = r.stats.searches;
  j["expansions"] = r.stats.expansions;
  j["edges_evaluated"] = r.stats.edges_evaluated;
  j["edges_discovered"] = r.stats.edges_discovered;
  j["goal_g_trace"] = r.stats.goal_g_trace;
  j["path"] = r.path;
  std::cout << j.dump(2) << '\n';
  if (!o.out.empty()) mplp::emit_report({row}, mplp::parse_format(o.format), o.out);
  return all_bounds_ok({row}) ? 0 : 1;
}

int run_bench(mplp::TrialSpec spec, const CliOptions& o) {
  finish_spec(spec, o);
  const std::vector<mplp::TrialRow> rows = mplp::run_trials(spec);
  write_rows(rows, o);
  return all_bounds_ok(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Parallel lazy planning benchmarks"};
  app.require_subcommand(1);

  mplp::TrialSpec plan_spec;
  CliOptions plan_opts;
  CLI::App* plan = app.add_subcommand("plan", "solve a single instance and print the result as JSON");
  add_common(*plan, plan_spec, plan_opts);

  mplp::TrialSpec bench_spec;
  CliOptions bench_opts;
  CLI::App* bench = app.add_subcommand("bench", "run a sweep of trials and write a report");
  add_common(*bench, bench_spec, bench_opts);
  bench->add_option("--trials", bench_spec.trials, "number of trials")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  try {
    if (plan->parsed()) return run_plan(plan_spec, plan_opts);
    return run_bench(bench_spec, bench_opts);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
