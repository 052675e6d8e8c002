#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>

namespace mplp {

/// Edge and path costs. Infinity marks an infeasible edge.
using Cost = double;
inline constexpr Cost kInfiniteCost = std::numeric_limits<Cost>::infinity();

inline bool is_finite(Cost c) { return c < kInfiniteCost; }

/// Domain-side encoding of a state. Domains pack their state into 64 bits;
/// equal payloads denote the same state.
using StatePayload = std::uint64_t;

enum class StateId : std::uint32_t {};
enum class ActionId : std::uint32_t {};
enum class EdgeId : std::uint32_t {};

inline constexpr StateId kNoState{std::numeric_limits<std::uint32_t>::max()};

constexpr std::size_t index(StateId s) { return static_cast<std::size_t>(s); }
constexpr std::size_t index(ActionId a) { return static_cast<std::size_t>(a); }
constexpr std::size_t index(EdgeId e) { return static_cast<std::size_t>(e); }

/// An edge is the pair (state where the action is executed, action).
struct EdgeKey {
  StateId state;
  ActionId action;

  friend bool operator==(const EdgeKey&, const EdgeKey&) = default;
};

struct EdgeKeyHash {
  std::size_t operator()(const EdgeKey& k) const noexcept {
    std::uint64_t v = (static_cast<std::uint64_t>(index(k.state)) << 32) | index(k.action);
    return std::hash<std::uint64_t>{}(v);
  }
};

}  // namespace mplp

template <>
struct std::hash<mplp::EdgeId> {
  std::size_t operator()(mplp::EdgeId e) const noexcept { return std::hash<std::uint32_t>{}(mplp::index(e)); }
};

template <>
struct std::hash<mplp::StateId> {
  std::size_t operator()(mplp::StateId s) const noexcept { return std::hash<std::uint32_t>{}(mplp::index(s)); }
};
