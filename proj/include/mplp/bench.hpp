#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "mplp/domain.hpp"
#include "mplp/planners.hpp"

namespace mplp {

enum class DomainKind { Grid, Graph };
enum class PlannerId { Mplp, Wastar, Lwastar, Lsp, Pwastar };
enum class ReportFormat { Csv, Json };

const char* to_string(DomainKind d);
const char* to_string(PlannerId p);
/// Throw ConfigError on unknown names.
DomainKind parse_domain_kind(const std::string& s);
PlannerId parse_planner(const std::string& s);
MonitorMode parse_mode(const std::string& s);
ReportFormat parse_format(const std::string& s);
/// "inf" or a number.
double parse_kappa(const std::string& s);

struct TrialSpec {
  DomainKind domain = DomainKind::Grid;
  /// Grid: map file; empty means a generated map (see below).
  std::filesystem::path map_path;
  /// Graph: edge-list file; start and goal come from the file.
  std::filesystem::path graph_path;

  int map_width = 100;
  int map_height = 100;
  double map_density = 0.2;
  std::uint64_t map_seed = 7;
  double map_resolution = 0.05;
  int theta_bins = 16;

  PlannerId planner = PlannerId::Mplp;
  double eps_h = 1.0;
  int n_threads = 3;  // MPLP thread budget; PWA* worker count
  double d_cc = 0;    // meters; 0 means a quarter of the map resolution
  /// Grid: sleep per collision check. Graph: when positive, replaces every
  /// edge's own delay.
  double eval_delay_ms = 0;
  int trials = 1;
  std::uint64_t seed = 0;
  MonitorMode mode = MonitorMode::Diversify;
  double kappa = kInfiniteCost;
  double time_limit_s = kInfiniteCost;
  std::size_t oracle_cap = kDefaultOracleCap;

  /// Grid start/goal sampling: Euclidean distance bounds in cells; 0 disables.
  double min_goal_distance = 0;
  double max_goal_distance = 0;
};

/// Throws ConfigError for invalid values and IoError for missing files.
void validate(const TrialSpec& spec);

struct TrialRow {
  int trial_id = 0;
  std::string planner;
  double eps_h = 1;
  int n_threads = 0;
  double d_cc = 0;
  double wall_time_s = 0;
  Cost solution_cost = kInfiniteCost;
  std::optional<Cost> optimal_cost;
  bool bound_ok = true;
  std::size_t edges_evaluated = 0;
  std::size_t searches = 0;
  std::string outcome;

  friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

/// Header of the CSV report: the TrialRow field names in declaration order.
const std::vector<std::string>& trial_row_fields();

/// One benchmark instance: the domain the planner runs on, a delay-free copy
/// for the oracle, and the optimum when it was computed.
struct TrialInstance {
  std::shared_ptr<const Domain> domain;
  std::shared_ptr<const Domain> oracle_domain;
  std::optional<Cost> optimal_cost;
  double d_cc = 0;
};

/// Builds the instance for one trial. Grid starts and goals are drawn from
/// the free cells with a generator seeded by (seed, trial); unreachable pairs
/// are rejected. Throws NoFreeStart when sampling keeps failing.
TrialInstance make_trial_instance(const TrialSpec& spec, int trial);

/// Runs one planner on one instance and times only the planner call.
PlanResult run_planner(const TrialSpec& spec, const Domain& domain);

/// bound_ok per TrialRow: Solved within eps_h of the optimum, NoPath exactly
/// when there is no path, vacuously true when the optimum is unknown or the
/// run timed out.
bool bound_satisfied(const PlanResult& result, std::optional<Cost> optimal, double eps_h);

TrialRow make_row(const TrialSpec& spec, int trial, const TrialInstance& instance, const PlanResult& result);

std::vector<TrialRow> run_trials(const TrialSpec& spec);

/// Writes the rows; JSON output also carries per-configuration means and the
/// speedup over WA* at the same eps_h and d_cc. Throws ContractViolation for
/// empty rows (nothing is written) and IoError.
void emit_report(const std::vector<TrialRow>& rows, ReportFormat format, const std::filesystem::path& out_path);
std::string format_csv(const std::vector<TrialRow>& rows);
std::string format_json(const std::vector<TrialRow>& rows);
/// Inverse of format_csv. Throws ParseError.
std::vector<TrialRow> parse_csv(std::istream& in);

/// Ratio of baseline to planner wall time.
double speedup(double baseline_s, double planner_s);

}  // namespace mplp
