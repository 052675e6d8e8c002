#pragma once

#include <cstddef>
#include <map>
#include <mutex>
#include <optional>
#include <stop_token>
#include <thread>
#include <vector>

#include "mplp/domain.hpp"
#include "mplp/lazy_graph.hpp"
#include "mplp/search.hpp"

namespace mplp {

enum class MonitorMode {
  Strict,     ///< no cost diversification; every registered path certifies
  Diversify,  ///< registered paths have their unevaluated edge costs raised
};

enum class PathStatus { Pending, Accepted, Pruned };

const char* to_string(PathStatus s);

/// A candidate path proposed by the search.
struct PathRecord {
  std::vector<EdgeId> edges;
  Cost goal_g = kInfiniteCost;  // g of the goal in the pass that proposed it
  std::size_t iteration = 0;    // registration sequence number
  PathStatus status = PathStatus::Pending;
};

struct Solution {
  PathRecord path;
  Cost true_cost = kInfiniteCost;
};

struct MonitorVerdict {
  std::optional<Solution> solution;  // empty: no verdict yet

  bool solved() const { return solution.has_value(); }
};

struct MonitorOptions {
  MonitorMode mode = MonitorMode::Strict;
  double kappa = kInfiniteCost;  // cost inflation factor in Diversify mode
};

/// Watches proposed paths while their edges are evaluated.
///
/// A pending path is pruned as soon as one of its edges is found infeasible.
/// It is accepted once every edge is evaluated and its true cost does not
/// exceed the certificate: the largest goal_g reported by a certifying
/// registration. Certifying passes search costs that never exceed true costs,
/// so every certificate is at most w times the optimal cost.
class PathMonitor {
 public:
  PathMonitor(const Domain& domain, LazyGraph& graph, MonitorOptions options = {});
  ~PathMonitor();

  PathMonitor(const PathMonitor&) = delete;
  PathMonitor& operator=(const PathMonitor&) = delete;

  /// Adds a path to the candidate set and raises the evaluation priority of
  /// its Open edges; in Diversify mode also inflates the stored cost of its
  /// Open or Eval edges. Re-registering an identical edge sequence keeps one
  /// record with the larger goal_g; returns false in that case. Throws
  /// MalformedPath.
  bool register_path(const std::vector<EdgeId>& edges, Cost goal_g, bool certifies = true);

  /// Re-examines every pending path once.
  MonitorVerdict poll();

  /// Runs poll() on its own thread whenever the graph reports a change, until
  /// a solution is found or stop() is called.
  void start();
  void stop();

  std::optional<Solution> solution() const;
  /// Stop requested once a solution has been accepted.
  std::stop_token solution_token() const { return solved_.get_token(); }

  std::vector<PathRecord> paths() const;
  Cost certificate() const;
  std::size_t registrations() const;
  MonitorOptions options() const { return options_; }

 private:
  void run(std::stop_token stop);
  void validate(const std::vector<EdgeId>& edges) const;

  const Domain& domain_;
  LazyGraph& graph_;
  const MonitorOptions options_;
  const StateId start_;

  mutable std::mutex mutex_;
  std::vector<PathRecord> paths_;
  std::map<std::vector<EdgeId>, std::size_t> path_index_;
  std::vector<std::size_t> pending_;
  Cost certificate_ = -kInfiniteCost;
  std::size_t registrations_ = 0;
  std::optional<Solution> solution_;
  std::stop_source solved_;

  std::jthread thread_;
};

/// True when the last pass was exhausted and it saw final costs everywhere:
/// E^open, E^eval and E^update are all empty.
bool check_termination_failure(const LazyGraph& graph, const SearchOutcome& last_outcome);

}  // namespace mplp
