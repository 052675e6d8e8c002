#include "mplp/lazy_graph.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mplp/errors.hpp"

namespace mplp {

namespace {

std::string describe(EdgeKey k) {
  return "(" + std::to_string(index(k.state)) + ", " + std::to_string(index(k.action)) + ")";
}

}  // namespace

const char* to_string(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::Unseen: return "Unseen";
    case EdgeStatus::Open: return "Open";
    case EdgeStatus::Eval: return "Eval";
    case EdgeStatus::Closed: return "Closed";
  }
  return "?";
}

StateId LazyGraph::intern_state(StatePayload payload) {
  {
    std::shared_lock lock(index_mutex_);
    if (auto it = state_index_.find(payload); it != state_index_.end()) return it->second;
  }
  std::unique_lock lock(index_mutex_);
  auto [it, inserted] = state_index_.try_emplace(payload, StateId{0});
  if (inserted) it->second = StateId{static_cast<std::uint32_t>(states_.emplace_back(payload))};
  return it->second;
}

std::optional<StateId> LazyGraph::find_state(StatePayload payload) const {
  std::shared_lock lock(index_mutex_);
  if (auto it = state_index_.find(payload); it != state_index_.end()) return it->second;
  return std::nullopt;
}

EdgeId LazyGraph::cache_lazy_successor(EdgeKey key, StateId successor, Cost lazy_cost) {
  if (!(lazy_cost >= 0)) throw ContractViolation("negative lazy cost on edge " + describe(key));
  std::unique_lock lock(index_mutex_);
  if (auto it = edge_index_.find(key); it != edge_index_.end()) {
    if (edges_[index(it->second)].successor() != successor) {
      throw DuplicateEdge("edge " + describe(key) + " already cached with a different successor");
    }
    return it->second;
  }
  const EdgeId id{static_cast<std::uint32_t>(edges_.emplace_back(key, successor, lazy_cost))};
  edge_index_.emplace(key, id);
  return id;
}

std::optional<EdgeId> LazyGraph::find_edge(EdgeKey key) const {
  std::shared_lock lock(index_mutex_);
  if (auto it = edge_index_.find(key); it != edge_index_.end()) return it->second;
  return std::nullopt;
}

EdgeId LazyGraph::edge_id(EdgeKey key) const {
  if (auto e = find_edge(key)) return *e;
  throw UnknownEdge("edge " + describe(key) + " is not cached");
}

std::optional<std::pair<StateId, Cost>> LazyGraph::lookup_successor(EdgeKey key) const {
  auto e = find_edge(key);
  if (!e) return std::nullopt;
  return std::pair{edge(*e).successor(), current_cost(*e)};
}

Cost LazyGraph::current_cost(EdgeId e) const {
  const EdgeRecord& r = edge(e);
  if (r.has_true_cost_.load(std::memory_order_acquire)) return r.true_cost_.load(std::memory_order_relaxed);
  return r.stored_cost_.load(std::memory_order_acquire);
}

Cost LazyGraph::underestimate_cost(EdgeId e) const {
  const EdgeRecord& r = edge(e);
  if (r.has_true_cost_.load(std::memory_order_acquire)) return r.true_cost_.load(std::memory_order_relaxed);
  return r.lazy_cost_;
}

bool LazyGraph::set_true_cost(EdgeId e, Cost true_cost) {
  EdgeRecord& r = mutable_edge(e);
  std::lock_guard lock(lifecycle_mutex_);
  if (r.has_true_cost_.load(std::memory_order_relaxed)) {
    throw AlreadyEvaluated("edge " + describe(r.key()) + " already has a true cost");
  }
  const Cost previous = r.stored_cost_.load(std::memory_order_relaxed);
  r.true_cost_.store(true_cost, std::memory_order_relaxed);
  r.has_true_cost_.store(true, std::memory_order_release);
  r.true_cost_writes_.fetch_add(1, std::memory_order_acq_rel);
  const bool changed = previous != true_cost;
  if (changed) updates_.insert(e);
  if (true_cost != r.lazy_cost_) true_change_epoch_.fetch_add(1, std::memory_order_acq_rel);
  return changed;
}

bool LazyGraph::inflate_cost(EdgeId e, double kappa) {
  EdgeRecord& r = mutable_edge(e);
  std::lock_guard lock(lifecycle_mutex_);
  if (r.has_true_cost_.load(std::memory_order_relaxed) || r.inflated_.load(std::memory_order_relaxed)) return false;
  const Cost raised = std::isinf(kappa) ? kInfiniteCost : r.lazy_cost_ * kappa;
  r.stored_cost_.store(raised, std::memory_order_release);
  r.inflated_.store(true, std::memory_order_release);
  updates_.insert(e);
  bump_locked();
  return true;
}

void LazyGraph::open_push(EdgeId e, std::uint32_t priority) {
  EdgeRecord& r = mutable_edge(e);
  std::lock_guard lock(lifecycle_mutex_);
  if (r.status() != EdgeStatus::Unseen) {
    throw InvalidTransition(std::string("open_push on ") + to_string(r.status()) + " edge " + describe(r.key()));
  }
  r.open_seq_ = next_seq_++;
  r.priority_.store(priority, std::memory_order_release);
  r.status_.store(EdgeStatus::Open, std::memory_order_release);
  open_.insert(OpenEntry{priority, r.open_seq_, e});
  ++pushed_;
  bump_locked();
}

std::optional<EdgeId> LazyGraph::pop_locked() {
  if (open_.empty()) return std::nullopt;
  const OpenEntry top = *open_.begin();
  open_.erase(open_.begin());
  if (!open_.empty() && open_.begin()->priority > top.priority) ++priority_inversions_;
  EdgeRecord& r = mutable_edge(top.edge);
  r.status_.store(EdgeStatus::Eval, std::memory_order_release);
  eval_.insert(top.edge);
  return top.edge;
}

std::optional<EdgeId> LazyGraph::open_pop_max() {
  std::lock_guard lock(lifecycle_mutex_);
  return pop_locked();
}

std::optional<EdgeId> LazyGraph::wait_pop_max(std::stop_token stop) {
  std::unique_lock lock(lifecycle_mutex_);
  if (!changed_.wait(lock, stop, [&] { return !open_.empty(); })) return std::nullopt;
  return pop_locked();
}

bool LazyGraph::try_inflate_priority(EdgeId e) {
  EdgeRecord& r = mutable_edge(e);
  std::lock_guard lock(lifecycle_mutex_);
  if (r.status() != EdgeStatus::Open) return false;
  const std::uint32_t p = r.priority();
  open_.erase(OpenEntry{p, r.open_seq_, e});
  r.priority_.store(p + 1, std::memory_order_release);
  open_.insert(OpenEntry{p + 1, r.open_seq_, e});
  return true;
}

void LazyGraph::inflate_priority(EdgeId e) {
  if (!try_inflate_priority(e)) {
    throw InvalidTransition(std::string("inflate_priority on ") + to_string(edge(e).status()) + " edge " +
                            describe(edge(e).key()));
  }
}

void LazyGraph::take_for_evaluation(EdgeId e) {
  EdgeRecord& r = mutable_edge(e);
  std::lock_guard lock(lifecycle_mutex_);
  if (r.status() != EdgeStatus::Open) {
    throw InvalidTransition(std::string("take_for_evaluation on ") + to_string(r.status()) + " edge " +
                            describe(r.key()));
  }
  open_.erase(OpenEntry{r.priority(), r.open_seq_, e});
  r.status_.store(EdgeStatus::Eval, std::memory_order_release);
  eval_.insert(e);
}

void LazyGraph::close(EdgeId e) {
  EdgeRecord& r = mutable_edge(e);
  {
    std::lock_guard lock(lifecycle_mutex_);
    if (r.status() != EdgeStatus::Eval) {
      throw InvalidTransition(std::string("close on ") + to_string(r.status()) + " edge " + describe(r.key()));
    }
    if (!r.has_true_cost_.load(std::memory_order_relaxed)) {
      throw InvalidTransition("close on edge " + describe(r.key()) + " without a true cost");
    }
    eval_.erase(e);
    closed_.insert(e);
    r.status_.store(EdgeStatus::Closed, std::memory_order_release);
    bump_locked();
  }
}

std::vector<EdgeId> LazyGraph::drain_updates() {
  std::vector<EdgeId> out;
  {
    std::lock_guard lock(lifecycle_mutex_);
    out.assign(updates_.begin(), updates_.end());
    updates_.clear();
  }
  std::sort(out.begin(), out.end());
  return out;
}

bool LazyGraph::has_pending_updates() const {
  std::lock_guard lock(lifecycle_mutex_);
  return !updates_.empty();
}

bool LazyGraph::evaluation_idle() const {
  std::lock_guard lock(lifecycle_mutex_);
  return open_.empty() && eval_.empty();
}

LifecycleCounts LazyGraph::counts() const {
  std::lock_guard lock(lifecycle_mutex_);
  return {open_.size(), eval_.size(), closed_.size(), updates_.size(), pushed_};
}

bool LazyGraph::lifecycle_consistent() const {
  std::lock_guard lock(lifecycle_mutex_);
  if (open_.size() + eval_.size() + closed_.size() != pushed_) return false;
  for (const auto& entry : open_) {
    if (eval_.count(entry.edge) || closed_.count(entry.edge)) return false;
    if (edge(entry.edge).status() != EdgeStatus::Open) return false;
  }
  for (EdgeId e : eval_) {
    if (closed_.count(e) || edge(e).status() != EdgeStatus::Eval) return false;
  }
  for (EdgeId e : closed_) {
    const EdgeRecord& r = edge(e);
    if (r.status() != EdgeStatus::Closed || !r.true_cost()) return false;
  }
  return true;
}

std::size_t LazyGraph::priority_inversions() const {
  std::lock_guard lock(lifecycle_mutex_);
  return priority_inversions_;
}

void LazyGraph::bump_locked() {
  change_epoch_.fetch_add(1, std::memory_order_acq_rel);
  changed_.notify_all();
}

void LazyGraph::notify_change() {
  std::lock_guard lock(lifecycle_mutex_);
  bump_locked();
}

bool LazyGraph::wait_for_change(std::uint64_t seen, std::stop_token stop, Clock::time_point deadline) {
  std::unique_lock lock(lifecycle_mutex_);
  return changed_.wait_until(lock, stop, deadline, [&] { return change_epoch() != seen; });
}

}  // namespace mplp
