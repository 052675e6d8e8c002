#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mplp/domains/explicit_graph.hpp"
#include "mplp/lazy_graph.hpp"

namespace fixtures {

// Fixture D: s0=0, a=1, b=2, goal=3, zero heuristic.
//   e1 s0->a  lazy 1 true 2
//   e2 s0->b  lazy 2 true 2
//   e3 a->goal lazy 1 true 10
//   e4 b->goal lazy 2 true 2
// Fixture I: same topology with e3 and e4 infeasible.
inline constexpr std::uint32_t kS0 = 0, kA = 1, kB = 2, kGoal = 3;

mplp::ExplicitGraphDomain fixture_d(double delay_ms = 0);
mplp::ExplicitGraphDomain fixture_i(double delay_ms = 0);
std::string fixture_d_text();

/// Edge ids of e1..e4 after generating every fixture edge into `graph`
/// (indices 0..3 hold e1..e4).
std::vector<mplp::EdgeId> cache_all_edges(const mplp::ExplicitGraphDomain& d, mplp::LazyGraph& graph);

/// Reference shortest-path cost by Bellman-Ford over true costs.
double bellman_ford_optimum(const mplp::ExplicitGraphDomain& d);

/// Brute-force reference of the best cost among all simple paths, for graphs
/// with very few vertices.
double exhaustive_optimum(const mplp::ExplicitGraphDomain& d);

}  // namespace fixtures
