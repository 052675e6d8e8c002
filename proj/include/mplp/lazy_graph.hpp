#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <limits>
#include <mutex>
#include <optional>
#include <set>
#include <shared_mutex>
#include <stop_token>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "mplp/stable_vector.hpp"
#include "mplp/types.hpp"

namespace mplp {

/// Position of an edge in the evaluation lifecycle. Transitions only move
/// forward: Unseen -> Open -> Eval -> Closed.
enum class EdgeStatus : std::uint8_t { Unseen, Open, Eval, Closed };

const char* to_string(EdgeStatus s);

/// One lazily generated edge. Immutable identity plus atomically updated
/// cost, status and priority, so records can be read from any thread.
class EdgeRecord {
 public:
  EdgeRecord(EdgeKey key, StateId successor, Cost lazy_cost)
      : key_(key), successor_(successor), lazy_cost_(lazy_cost), stored_cost_(lazy_cost) {}

  EdgeKey key() const { return key_; }
  StateId successor() const { return successor_; }
  Cost lazy_cost() const { return lazy_cost_; }

  std::optional<Cost> true_cost() const {
    if (!has_true_cost_.load(std::memory_order_acquire)) return std::nullopt;
    return true_cost_.load(std::memory_order_relaxed);
  }
  EdgeStatus status() const { return status_.load(std::memory_order_acquire); }
  std::uint32_t priority() const { return priority_.load(std::memory_order_acquire); }
  bool inflated() const { return inflated_.load(std::memory_order_acquire); }
  /// Number of times a true cost was written; 1 at most on a healthy run.
  std::uint32_t true_cost_writes() const { return true_cost_writes_.load(std::memory_order_acquire); }

 private:
  friend class LazyGraph;

  const EdgeKey key_;
  const StateId successor_;
  const Cost lazy_cost_;
  std::atomic<Cost> stored_cost_;
  std::atomic<Cost> true_cost_{kInfiniteCost};
  std::atomic<bool> has_true_cost_{false};
  std::atomic<EdgeStatus> status_{EdgeStatus::Unseen};
  std::atomic<std::uint32_t> priority_{0};
  std::atomic<bool> inflated_{false};
  std::atomic<std::uint32_t> true_cost_writes_{0};
  std::uint64_t open_seq_ = 0;  // guarded by the lifecycle mutex
};

/// Snapshot of the four shared edge sets.
struct LifecycleCounts {
  std::size_t open = 0;
  std::size_t eval = 0;
  std::size_t closed = 0;
  std::size_t updates = 0;
  std::size_t pushed = 0;
};

/// The lazily constructed graph together with its edge lifecycle
/// (E^open, E^eval, E^closed, E^update).
///
/// States and edges are only ever added, never removed; ids are dense and
/// stable. Every member is safe to call concurrently. Edge insertion is
/// serialized internally, per-edge reads are lock-free, and lifecycle
/// transitions happen under one mutex so the sets stay pairwise disjoint.
class LazyGraph {
 public:
  using Clock = std::chrono::steady_clock;

  LazyGraph() = default;
  LazyGraph(const LazyGraph&) = delete;
  LazyGraph& operator=(const LazyGraph&) = delete;

  // ---- states ----
  StateId intern_state(StatePayload payload);
  std::optional<StateId> find_state(StatePayload payload) const;
  StatePayload payload(StateId s) const { return states_[index(s)]; }
  std::size_t state_count() const { return states_.size(); }

  // ---- edges ----
  /// Records the lazily generated successor of `key`. Re-caching an
  /// identical successor is a no-op returning the existing id.
  EdgeId cache_lazy_successor(EdgeKey key, StateId successor, Cost lazy_cost);
  std::optional<EdgeId> find_edge(EdgeKey key) const;
  /// Like find_edge but throws UnknownEdge.
  EdgeId edge_id(EdgeKey key) const;
  const EdgeRecord& edge(EdgeId e) const { return edges_[index(e)]; }
  std::size_t edge_count() const { return edges_.size(); }
  /// (successor, current cost) of a cached edge.
  std::optional<std::pair<StateId, Cost>> lookup_successor(EdgeKey key) const;

  /// True cost once evaluated, otherwise the stored lazy cost (which may have
  /// been raised by inflate_cost).
  Cost current_cost(EdgeId e) const;
  Cost current_cost(EdgeKey key) const { return current_cost(edge_id(key)); }
  /// True cost once evaluated, otherwise the original lazy cost. Never
  /// exceeds the true cost of an admissible domain.
  Cost underestimate_cost(EdgeId e) const;

  /// Records the evaluated cost. Returns whether it differs from the current
  /// cost; changed edges land in E^update. Throws AlreadyEvaluated.
  bool set_true_cost(EdgeId e, Cost true_cost);

  /// Raises the stored cost of an unevaluated edge to kappa * lazy (infinite
  /// when kappa is infinite) and records it in E^update. Returns false when
  /// the edge is already evaluated or already inflated.
  bool inflate_cost(EdgeId e, double kappa);

  // ---- lifecycle ----
  /// Unseen -> Open with the given priority.
  void open_push(EdgeId e, std::uint32_t priority);
  /// Removes the highest-priority edge (FIFO among equals) and moves it to
  /// E^eval. Empty optional when E^open is empty.
  std::optional<EdgeId> open_pop_max();
  /// Blocking variant of open_pop_max; returns empty once `stop` is requested.
  std::optional<EdgeId> wait_pop_max(std::stop_token stop);
  /// Adds 1 to the priority of an Open edge. Throws InvalidTransition.
  void inflate_priority(EdgeId e);
  /// Same as inflate_priority but returns false instead of throwing when the
  /// edge is no longer Open.
  bool try_inflate_priority(EdgeId e);
  /// Moves a specific Open edge to E^eval.
  void take_for_evaluation(EdgeId e);
  /// Eval -> Closed. The true cost must already be recorded.
  void close(EdgeId e);
  /// Returns and clears E^update, sorted by id.
  std::vector<EdgeId> drain_updates();

  bool has_pending_updates() const;
  /// True when E^open and E^eval are both empty.
  bool evaluation_idle() const;
  LifecycleCounts counts() const;
  /// Checks set disjointness and agreement with per-edge status.
  bool lifecycle_consistent() const;
  /// Number of times a popped edge had lower priority than one left queued.
  std::size_t priority_inversions() const;

  // ---- change notification ----
  /// Bumped on every closure, cost inflation and explicit notify_change().
  std::uint64_t change_epoch() const { return change_epoch_.load(std::memory_order_acquire); }
  /// Bumped whenever a recorded true cost differs from the lazy cost.
  std::uint64_t true_change_epoch() const { return true_change_epoch_.load(std::memory_order_acquire); }
  void notify_change();
  /// Waits until change_epoch() != seen, `stop` is requested or the deadline
  /// passes. Returns whether a change was observed.
  bool wait_for_change(std::uint64_t seen, std::stop_token stop,
                       Clock::time_point deadline = Clock::time_point::max());

 private:
  struct OpenEntry {
    std::uint32_t priority;
    std::uint64_t seq;
    EdgeId edge;

    bool operator<(const OpenEntry& o) const {
      if (priority != o.priority) return priority > o.priority;
      return seq < o.seq;
    }
  };

  EdgeRecord& mutable_edge(EdgeId e) { return edges_[index(e)]; }
  std::optional<EdgeId> pop_locked();
  void bump_locked();

  // states and edges
  mutable std::shared_mutex index_mutex_;
  std::unordered_map<StatePayload, StateId> state_index_;
  std::unordered_map<EdgeKey, EdgeId, EdgeKeyHash> edge_index_;
  StableVector<StatePayload> states_;
  StableVector<EdgeRecord> edges_;

  // lifecycle
  mutable std::mutex lifecycle_mutex_;
  std::condition_variable_any changed_;
  std::set<OpenEntry> open_;
  std::unordered_set<EdgeId> eval_;
  std::unordered_set<EdgeId> closed_;
  std::unordered_set<EdgeId> updates_;
  std::uint64_t next_seq_ = 0;
  std::size_t pushed_ = 0;
  std::size_t priority_inversions_ = 0;

  std::atomic<std::uint64_t> change_epoch_{0};
  std::atomic<std::uint64_t> true_change_epoch_{0};
};

}  // namespace mplp

