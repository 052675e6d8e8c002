#include "mplp/evaluator.hpp"

#include <iostream>

#include "mplp/errors.hpp"

namespace mplp {

Evaluation evaluate_one(EdgeId edge, const Domain& domain, const LazyGraph& graph) {
  const EdgeRecord& r = graph.edge(edge);
  const Transition t = domain.true_evaluate(graph.payload(r.key().state), r.key().action);
  const bool same_successor =
      r.successor() == kNoState ? !t.successor : (t.successor && *t.successor == graph.payload(r.successor()));
  if (!same_successor) {
    throw SuccessorMismatch("true evaluation of edge " + std::to_string(index(edge)) +
                            " reached a different state than its lazy successor");
  }
  if (t.cost < r.lazy_cost()) {
    throw DomainContractViolation("edge " + std::to_string(index(edge)) + " has lazy cost " +
                                  std::to_string(r.lazy_cost()) + " above its true cost " + std::to_string(t.cost));
  }
  return {r.successor(), t.cost};
}

bool apply_evaluation(EdgeId edge, Cost true_cost, LazyGraph& graph) {
  const bool changed = graph.set_true_cost(edge, true_cost);
  graph.close(edge);
  return changed;
}

EdgeEvaluator::EdgeEvaluator(const Domain& domain, LazyGraph& graph, std::size_t worker_count)
    : domain_(domain), graph_(graph), worker_count_(worker_count) {
  if (worker_count == 0) throw ConfigError("evaluator needs at least one worker");
}

EdgeEvaluator::~EdgeEvaluator() { stop(); }

void EdgeEvaluator::start() {
  if (started_) return;
  started_ = true;
  idle_ = worker_count_;
  draining_ = false;
  workers_.reserve(worker_count_);
  for (std::size_t i = 0; i < worker_count_; ++i) workers_.emplace_back([this] { worker_loop(); });
  dispatcher_ = std::jthread([this](std::stop_token st) { dispatch_loop(st); });
}

void EdgeEvaluator::stop() {
  if (!started_) return;
  started_ = false;
  dispatcher_.request_stop();
  if (dispatcher_.joinable()) dispatcher_.join();
  {
    std::lock_guard lock(mutex_);
    draining_ = true;
  }
  cv_.notify_all();
  for (auto& w : workers_) w.join();
  workers_.clear();
}

void EdgeEvaluator::dispatch_loop(std::stop_token stop) {
  while (!stop.stop_requested()) {
    {
      std::unique_lock lock(mutex_);
      if (!cv_.wait(lock, stop, [&] { return idle_ > 0; })) return;
    }
    const std::optional<EdgeId> e = graph_.wait_pop_max(stop);
    if (!e) return;
    {
      std::lock_guard lock(mutex_);
      --idle_;
      handoff_.push_back(*e);
      dispatch_log_.push_back(*e);
    }
    cv_.notify_all();
  }
}

void EdgeEvaluator::worker_loop() {
  for (;;) {
    EdgeId e;
    {
      std::unique_lock lock(mutex_);
      cv_.wait(lock, [&] { return !handoff_.empty() || draining_; });
      if (handoff_.empty()) return;
      e = handoff_.front();
      handoff_.pop_front();
    }
    run_one(e);
    {
      std::lock_guard lock(mutex_);
      ++idle_;
    }
    cv_.notify_all();
  }
}

void EdgeEvaluator::run_one(EdgeId e) {
  Cost cost = kInfiniteCost;
  bool failed = false;
  try {
    cost = evaluate_one(e, domain_, graph_).true_cost;
  } catch (const SuccessorMismatch& ex) {
    failed = true;
    std::lock_guard lock(mutex_);
    if (!violation_) violation_ = ex.what();
  } catch (const DomainContractViolation& ex) {
    failed = true;
    std::lock_guard lock(mutex_);
    if (!violation_) violation_ = ex.what();
  } catch (const std::exception& ex) {
    failed = true;
    std::clog << "mplp: evaluation of edge " << index(e) << " failed: " << ex.what() << "; marking infeasible\n";
  }
  apply_evaluation(e, cost, graph_);
  std::lock_guard lock(mutex_);
  ++stats_.evaluations;
  if (failed) ++stats_.failures;
}

EvaluatorStats EdgeEvaluator::stats() const {
  std::lock_guard lock(mutex_);
  return stats_;
}

std::optional<std::string> EdgeEvaluator::contract_violation() const {
  std::lock_guard lock(mutex_);
  return violation_;
}

std::vector<EdgeId> EdgeEvaluator::dispatch_log() const {
  std::lock_guard lock(mutex_);
  return dispatch_log_;
}

}  // namespace mplp
