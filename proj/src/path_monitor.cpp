#include "mplp/path_monitor.hpp"

#include <algorithm>
#include <cassert>
#include <string>

#include "mplp/errors.hpp"

namespace mplp {

const char* to_string(PathStatus s) {
  switch (s) {
    case PathStatus::Pending: return "Pending";
    case PathStatus::Accepted: return "Accepted";
    case PathStatus::Pruned: return "Pruned";
  }
  return "?";
}

PathMonitor::PathMonitor(const Domain& domain, LazyGraph& graph, MonitorOptions options)
    : domain_(domain), graph_(graph), options_(options), start_(graph.intern_state(domain.start())) {}

PathMonitor::~PathMonitor() { stop(); }

void PathMonitor::validate(const std::vector<EdgeId>& edges) const {
  if (edges.empty()) throw MalformedPath("empty path");
  for (EdgeId e : edges) {
    if (index(e) >= graph_.edge_count()) throw MalformedPath("path references unknown edge " + std::to_string(index(e)));
  }
  if (graph_.edge(edges.front()).key().state != start_) throw MalformedPath("path does not leave the start state");
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    if (graph_.edge(edges[i]).successor() != graph_.edge(edges[i + 1]).key().state) {
      throw MalformedPath("path is not connected at position " + std::to_string(i));
    }
  }
  const StateId last = graph_.edge(edges.back()).successor();
  if (last == kNoState || !domain_.is_goal(graph_.payload(last))) {
    throw MalformedPath("path does not end in the goal region");
  }
}

bool PathMonitor::register_path(const std::vector<EdgeId>& edges, Cost goal_g, bool certifies) {
  validate(edges);
  for (EdgeId e : edges) {
    graph_.try_inflate_priority(e);
    if (options_.mode == MonitorMode::Diversify) graph_.inflate_cost(e, options_.kappa);
  }
  bool inserted = false;
  {
    std::lock_guard lock(mutex_);
    ++registrations_;
    if (certifies) certificate_ = std::max(certificate_, goal_g);
    auto [it, fresh] = path_index_.try_emplace(edges, paths_.size());
    inserted = fresh;
    if (fresh) {
      paths_.push_back(PathRecord{edges, goal_g, registrations_, PathStatus::Pending});
      pending_.push_back(it->second);
    } else {
      PathRecord& p = paths_[it->second];
      p.goal_g = std::max(p.goal_g, goal_g);
    }
  }
  graph_.notify_change();
  return inserted;
}

MonitorVerdict PathMonitor::poll() {
  std::lock_guard lock(mutex_);
  if (solution_) return {solution_};

  std::optional<std::size_t> best;
  Cost best_cost = kInfiniteCost;
  std::vector<std::size_t> still_pending;
  still_pending.reserve(pending_.size());
  for (std::size_t i : pending_) {
    PathRecord& p = paths_[i];
    bool complete = true;
    bool infeasible = false;
    Cost sum = 0;
    for (EdgeId e : p.edges) {
      const EdgeRecord& r = graph_.edge(e);
      if (r.status() != EdgeStatus::Closed) {
        complete = false;
        continue;
      }
      const Cost c = *r.true_cost();
      if (!is_finite(c)) {
        infeasible = true;
        break;
      }
      sum += c;
    }
    if (infeasible) {
      p.status = PathStatus::Pruned;
      continue;
    }
    still_pending.push_back(i);
    if (complete && sum <= certificate_ && sum < best_cost) {
      best = i;
      best_cost = sum;
    }
  }
  pending_ = std::move(still_pending);

  if (!best) return {};
  PathRecord& accepted = paths_[*best];
  accepted.status = PathStatus::Accepted;
  pending_.erase(std::find(pending_.begin(), pending_.end(), *best));
  assert(best_cost <= certificate_ && is_finite(best_cost));
  solution_ = Solution{accepted, best_cost};
  solved_.request_stop();
  return {solution_};
}

void PathMonitor::run(std::stop_token stop) {
  while (!stop.stop_requested()) {
    const std::uint64_t seen = graph_.change_epoch();
    if (poll().solved()) {
      graph_.notify_change();
      return;
    }
    graph_.wait_for_change(seen, stop);
  }
}

void PathMonitor::start() {
  if (thread_.joinable()) return;
  thread_ = std::jthread([this](std::stop_token st) { run(st); });
}

void PathMonitor::stop() {
  if (!thread_.joinable()) return;
  thread_.request_stop();
  thread_.join();
}

std::optional<Solution> PathMonitor::solution() const {
  std::lock_guard lock(mutex_);
  return solution_;
}

std::vector<PathRecord> PathMonitor::paths() const {
  std::lock_guard lock(mutex_);
  return paths_;
}

Cost PathMonitor::certificate() const {
  std::lock_guard lock(mutex_);
  return certificate_;
}

std::size_t PathMonitor::registrations() const {
  std::lock_guard lock(mutex_);
  return registrations_;
}

bool check_termination_failure(const LazyGraph& graph, const SearchOutcome& last_outcome) {
  if (last_outcome.kind != SearchOutcome::Kind::Exhausted) return false;
  const LifecycleCounts c = graph.counts();
  return c.open == 0 && c.eval == 0 && c.updates == 0;
}

}  // namespace mplp
