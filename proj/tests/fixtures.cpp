#include "fixtures.hpp"

#include <functional>
#include <limits>

namespace fixtures {

using mplp::GraphEdgeSpec;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

mplp::ExplicitGraphDomain fixture_d(double delay_ms) {
  return mplp::ExplicitGraphDomain(4, kS0, {kGoal},
                                   {GraphEdgeSpec{kS0, kA, 1, 2, delay_ms}, GraphEdgeSpec{kS0, kB, 2, 2, delay_ms},
                                    GraphEdgeSpec{kA, kGoal, 1, 10, delay_ms},
                                    GraphEdgeSpec{kB, kGoal, 2, 2, delay_ms}});
}

mplp::ExplicitGraphDomain fixture_i(double delay_ms) {
  return mplp::ExplicitGraphDomain(4, kS0, {kGoal},
                                   {GraphEdgeSpec{kS0, kA, 1, 2, delay_ms}, GraphEdgeSpec{kS0, kB, 2, 2, delay_ms},
                                    GraphEdgeSpec{kA, kGoal, 1, kInf, delay_ms},
                                    GraphEdgeSpec{kB, kGoal, 2, kInf, delay_ms}});
}

std::string fixture_d_text() {
  return "# fixture D\n"
         "4 0 3\n"
         "0 1 1 2 0\n"
         "0 2 2 2 0\n"
         "1 3 1 10 0\n"
         "2 3 2 2 0\n";
}

std::vector<mplp::EdgeId> cache_all_edges(const mplp::ExplicitGraphDomain& d, mplp::LazyGraph& graph) {
  std::vector<mplp::EdgeId> ids;
  for (const auto& e : d.edges()) {
    const mplp::StateId from = graph.intern_state(e.from);
    const mplp::StateId to = graph.intern_state(e.to);
    std::uint32_t action = 0;
    for (std::uint32_t a = 0; a < d.action_count(e.from); ++a) {
      if (&d.edge_for(e.from, mplp::ActionId{a}) == &e) action = a;
    }
    ids.push_back(graph.cache_lazy_successor({from, mplp::ActionId{action}}, to, e.lazy_cost));
  }
  return ids;
}

double bellman_ford_optimum(const mplp::ExplicitGraphDomain& d) {
  const std::size_t n = d.vertex_count();
  std::vector<double> dist(n, kInf);
  dist[static_cast<std::size_t>(d.start())] = 0;
  for (std::size_t round = 0; round + 1 < n; ++round) {
    bool changed = false;
    for (const auto& e : d.edges()) {
      if (dist[e.from] + e.true_cost < dist[e.to]) {
        dist[e.to] = dist[e.from] + e.true_cost;
        changed = true;
      }
    }
    if (!changed) break;
  }
  double best = kInf;
  for (auto g : d.goals()) best = std::min(best, dist[g]);
  return best;
}

double exhaustive_optimum(const mplp::ExplicitGraphDomain& d) {
  const std::size_t n = d.vertex_count();
  std::vector<bool> on_path(n, false);
  double best = kInf;
  std::function<void(std::uint32_t, double)> dfs = [&](std::uint32_t v, double cost) {
    if (d.is_goal(v)) best = std::min(best, cost);
    on_path[v] = true;
    for (const auto& e : d.edges()) {
      if (e.from == v && !on_path[e.to] && e.true_cost < kInf) dfs(e.to, cost + e.true_cost);
    }
    on_path[v] = false;
  };
  dfs(static_cast<std::uint32_t>(d.start()), 0);
  return best;
}

}  // namespace fixtures
