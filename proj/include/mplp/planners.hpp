#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "mplp/domain.hpp"
#include "mplp/path_monitor.hpp"
#include "mplp/types.hpp"

namespace mplp {

struct PlannerConfig {
  double eps_h = 1.0;
  int n_threads = 3;  // total budget: search + dispatcher + monitor + workers
  MonitorMode mode = MonitorMode::Strict;
  double kappa = kInfiniteCost;
  double time_limit_s = kInfiniteCost;
  std::uint64_t seed = 0;
  /// After a solution is accepted, keep evaluating until E^open and E^eval
  /// are empty before shutting down. Instrumentation only.
  bool evaluate_all = false;
};

/// Throws ConfigError unless eps_h is finite and >= 1, n_threads >= 3,
/// kappa >= 1 and time_limit_s > 0.
void validate(const PlannerConfig& config);

/// Evaluation workers for a thread budget: max(1, n_threads - 3).
std::size_t worker_count_for(int n_threads);

enum class PlanOutcome { Solved, NoPath, Timeout };

const char* to_string(PlanOutcome o);

struct PlanStats {
  double wall_time_s = 0;
  std::size_t searches = 0;
  std::size_t expansions = 0;
  std::size_t edges_evaluated = 0;
  std::size_t edges_discovered = 0;  // edges with a finite lazy cost
  /// goal_g of every pass that searched lazy-or-true costs, in order.
  std::vector<Cost> goal_g_trace;

  // Lifecycle instrumentation (MPLP and LSP only).
  std::uint32_t max_evaluations_per_edge = 0;
  bool lifecycle_consistent = true;
  bool fully_evaluated = false;  // E^open and E^eval empty at shutdown
  std::size_t priority_inversions = 0;
  std::size_t paths_registered = 0;
  std::size_t evaluation_failures = 0;
};

struct PlanResult {
  PlanOutcome outcome = PlanOutcome::NoPath;
  /// States from start to goal; empty unless solved.
  std::vector<StatePayload> path;
  std::vector<ActionId> actions;
  Cost true_cost = kInfiniteCost;
  PlanStats stats;

  bool solved() const { return outcome == PlanOutcome::Solved; }
};

/// Parallel lazy planning: one search thread, one dispatcher, one path
/// monitor and max(1, n_threads - 3) evaluation workers.
///
/// Every pass that reads lazy-or-true costs certifies: its goal_g is an upper
/// bound for acceptance. In Diversify mode the planner additionally runs
/// passes over the inflated costs to propose alternative routes; those
/// passes only steer evaluation and never certify.
///
/// Throws ConfigError and DomainContractViolation.
PlanResult plan_mplp(const Domain& domain, const PlannerConfig& config);

/// Weighted A* evaluating every generated edge inline. Edges whose lazy cost
/// is already infinite are skipped without a true evaluation.
PlanResult plan_wastar(const Domain& domain, double w, double time_limit_s = kInfiniteCost);

/// Weighted A* whose per-expansion edge evaluations run on n_workers threads
/// and are joined before relaxation.
PlanResult plan_pwastar(const Domain& domain, double w, std::size_t n_workers,
                        double time_limit_s = kInfiniteCost);

/// Lazy weighted A*: a successor is queued with its lazy edge cost and the
/// edge is evaluated only when that queue entry is popped.
PlanResult plan_lwastar(const Domain& domain, double w, double time_limit_s = kInfiniteCost);

/// Lazy shortest path: search, evaluate every unevaluated edge of the result
/// in path order, repeat until the returned path is fully evaluated.
PlanResult plan_lsp(const Domain& domain, double w, double time_limit_s = kInfiniteCost);

inline constexpr std::size_t kDefaultOracleCap = 100000;

/// Optimal true cost from the start to the goal region, by Dijkstra over
/// true-evaluated edges (infinite if unreachable). Runs the domain's true
/// evaluator, so pass a domain without artificial delay. Throws GraphTooLarge
/// when the domain's state bound, or the number of states reached, exceeds
/// `state_cap`.
Cost optimal_cost_oracle(const Domain& domain, std::size_t state_cap = kDefaultOracleCap);

/// Sum of true costs along `actions` from the start; infinite if an action
/// is infeasible. Runs the true evaluator.
Cost path_true_cost(const Domain& domain, const std::vector<ActionId>& actions);

}  // namespace mplp
