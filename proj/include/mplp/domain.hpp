#pragma once

#include <cstddef>
#include <optional>

#include "mplp/types.hpp"

namespace mplp {

/// Outcome of applying an action: the successor state and the edge cost.
/// `successor` is empty when the action leaves the state space (cost is then
/// infinite).
struct Transition {
  std::optional<StatePayload> successor;
  Cost cost = kInfiniteCost;
};

/// Environment contract shared by every planner.
///
/// Implementations are immutable after construction and every member must be
/// safe to call concurrently. `true_evaluate` is the expensive routine; it must
/// be deterministic, agree with `lazy_successor` on the successor state, and
/// never report a cost below the lazy one.
class Domain {
 public:
  virtual ~Domain() = default;

  virtual StatePayload start() const = 0;
  virtual bool is_goal(StatePayload s) const = 0;
  /// Admissible and consistent estimate of the cost-to-go.
  virtual Cost heuristic(StatePayload s) const = 0;

  /// Number of actions applicable at `s`; actions are numbered 0..n-1.
  virtual std::size_t action_count(StatePayload s) const = 0;
  virtual Transition lazy_successor(StatePayload s, ActionId a) const = 0;
  virtual Transition true_evaluate(StatePayload s, ActionId a) const = 0;

  /// Upper bound on the number of states, when the domain can tell cheaply.
  virtual std::optional<std::size_t> state_space_bound() const { return std::nullopt; }
};

}  // namespace mplp
