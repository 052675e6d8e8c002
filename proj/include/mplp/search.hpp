#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <queue>
#include <stop_token>
#include <vector>

#include "mplp/domain.hpp"
#include "mplp/lazy_graph.hpp"
#include "mplp/types.hpp"

namespace mplp {

/// Which edge costs a pass reads for unevaluated edges.
enum class CostView {
  Underestimate,  ///< original lazy cost; true cost once evaluated
  Current,        ///< stored cost, including any diversification inflation
};

/// Lexicographic open-list key, smaller first.
struct SearchKey {
  Cost primary;
  Cost secondary;

  friend auto operator<=>(const SearchKey&, const SearchKey&) = default;
};

/// Per-pass bookkeeping for one state.
struct StateRecord {
  StateId id = kNoState;
  Cost g_val = kInfiniteCost;
  Cost v_val = kInfiniteCost;  // g at expansion; infinite until expanded
  Cost h_val = kInfiniteCost;
  std::optional<EdgeId> parent_edge;
  Cost parent_cost = kInfiniteCost;  // cost of parent_edge as read when relaxed
  bool in_open = false;
};

/// A path from the start to a goal state, as found by one pass.
struct GoalPath {
  std::vector<EdgeId> edges;
  Cost goal_g = kInfiniteCost;
  StateId goal = kNoState;
};

struct PassStats {
  std::size_t expansions = 0;
  std::size_t new_edges = 0;   // edges generated lazily during the pass
  std::size_t cache_hits = 0;  // edges read back from the lazy graph
};

struct SearchOutcome {
  enum class Kind { GoalReached, Exhausted, Interrupted };

  Kind kind = Kind::Exhausted;
  GoalPath path;  // meaningful for GoalReached only
  PassStats stats;

  bool reached() const { return kind == Kind::GoalReached; }
};

/// Open-list key for a state about to be expanded: (g + w*h, g).
SearchKey key(const StateRecord& state, double weight);

/// Evaluation priority assigned to a newly discovered edge.
std::uint32_t edge_base_priority(EdgeId edge);

/// Weighted A* over the lazy graph.
///
/// Each compute_path call is an independent pass from scratch: g and v values
/// are reset, while heuristic values and the lazily generated graph persist
/// across passes. Edges seen for the first time are generated with the
/// domain's lazy successor function, cached, and pushed to E^open (unless
/// their lazy cost is infinite). Every edge cost is read exactly once per
/// pass, so concurrent true-cost updates never make a pass inconsistent.
///
/// Not thread-safe itself; one search runs on one thread.
class LazySearch {
 public:
  LazySearch(const Domain& domain, LazyGraph& graph, double weight);

  SearchOutcome compute_path(CostView view, std::stop_token stop = {});

  // Building blocks of a pass, exposed for step-wise use.
  void begin_pass(CostView view);
  void expand(StateId s);
  /// Offers `via` (read at `via_cost`) as a parent of `s`, keeps the cheaper
  /// of it and the current parent, and refreshes the open-list entry.
  void update_state(StateId s, EdgeId via, Cost via_cost);
  const StateRecord& record(StateId s);
  bool in_open(StateId s) { return record(s).in_open; }
  StateId start() const { return start_; }

  double weight() const { return weight_; }
  std::size_t passes() const { return passes_; }
  std::size_t total_expansions() const { return total_expansions_; }

 private:
  struct OpenItem {
    SearchKey key;
    std::uint64_t seq;
    StateId state;

    bool operator>(const OpenItem& o) const {
      if (key != o.key) return key > o.key;
      return seq > o.seq;
    }
  };

  StateRecord& touch(StateId s);
  Cost heuristic(StateId s);
  Cost read_cost(EdgeId e) const;
  GoalPath backtrack(StateId goal);

  const Domain& domain_;
  LazyGraph& graph_;
  double weight_;
  StateId start_;

  CostView view_ = CostView::Underestimate;
  std::uint32_t pass_ = 0;
  std::vector<StateRecord> records_;
  std::vector<std::uint32_t> record_pass_;
  std::vector<Cost> h_cache_;
  std::priority_queue<OpenItem, std::vector<OpenItem>, std::greater<>> open_;
  std::uint64_t seq_ = 0;
  PassStats stats_;

  std::size_t passes_ = 0;
  std::size_t total_expansions_ = 0;
};

}  // namespace mplp
