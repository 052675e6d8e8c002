#pragma once

#include <condition_variable>
#include <cstddef>
#include <deque>
#include <mutex>
#include <optional>
#include <stop_token>
#include <string>
#include <thread>
#include <vector>

#include "mplp/domain.hpp"
#include "mplp/lazy_graph.hpp"

namespace mplp {

struct Evaluation {
  StateId successor = kNoState;
  Cost true_cost = kInfiniteCost;
};

/// Runs the domain's true evaluator on a cached edge.
///
/// Throws SuccessorMismatch if the evaluator lands on a different state than
/// the cached lazy successor, and DomainContractViolation if the true cost is
/// below the lazy one.
Evaluation evaluate_one(EdgeId edge, const Domain& domain, const LazyGraph& graph);

/// Commits an evaluation: records the true cost and moves the edge from
/// E^eval to E^closed. Returns whether the cost changed.
bool apply_evaluation(EdgeId edge, Cost true_cost, LazyGraph& graph);

struct EvaluatorStats {
  std::size_t evaluations = 0;
  std::size_t failures = 0;  // evaluator threw; edge closed as infeasible
};

/// Dispatcher plus a fixed pool of evaluation workers.
///
/// The dispatcher thread hands the highest-priority edge of E^open to the
/// next idle worker and blocks while no worker is idle or E^open is empty.
/// stop() makes the dispatcher cease popping; edges already handed out are
/// evaluated and committed before the workers are joined.
class EdgeEvaluator {
 public:
  EdgeEvaluator(const Domain& domain, LazyGraph& graph, std::size_t worker_count);
  ~EdgeEvaluator();

  EdgeEvaluator(const EdgeEvaluator&) = delete;
  EdgeEvaluator& operator=(const EdgeEvaluator&) = delete;

  void start();
  void stop();

  std::size_t worker_count() const { return worker_count_; }
  EvaluatorStats stats() const;
  /// First contract violation reported by a worker, if any.
  std::optional<std::string> contract_violation() const;
  /// Edges in the order they were dispatched.
  std::vector<EdgeId> dispatch_log() const;

 private:
  void dispatch_loop(std::stop_token stop);
  void worker_loop();
  void run_one(EdgeId e);

  const Domain& domain_;
  LazyGraph& graph_;
  const std::size_t worker_count_;

  mutable std::mutex mutex_;
  std::condition_variable_any cv_;
  std::deque<EdgeId> handoff_;
  std::size_t idle_ = 0;
  bool draining_ = false;
  EvaluatorStats stats_;
  std::optional<std::string> violation_;
  std::vector<EdgeId> dispatch_log_;

  std::vector<std::jthread> workers_;
  std::jthread dispatcher_;
  bool started_ = false;
};

}  // namespace mplp
