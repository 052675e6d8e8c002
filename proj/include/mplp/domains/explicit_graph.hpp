#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mplp/domain.hpp"

namespace mplp {

struct GraphEdgeSpec {
  std::uint32_t from = 0;
  std::uint32_t to = 0;
  Cost lazy_cost = 0;
  Cost true_cost = 0;
  double eval_delay_ms = 0;
};

/// A finite directed graph given edge by edge, each with its lazy and true
/// cost. Action `a` of vertex `v` is the a-th outgoing edge of `v` in input
/// order. The heuristic defaults to zero.
class ExplicitGraphDomain final : public Domain {
 public:
  /// Throws ContractViolation for out-of-range vertices, negative costs or a
  /// lazy cost above the true cost.
  ExplicitGraphDomain(std::size_t num_vertices, std::uint32_t start, std::vector<std::uint32_t> goals,
                      std::vector<GraphEdgeSpec> edges, std::vector<Cost> heuristic = {});

  StatePayload start() const override { return start_; }
  bool is_goal(StatePayload s) const override;
  Cost heuristic(StatePayload s) const override;
  std::size_t action_count(StatePayload s) const override;
  Transition lazy_successor(StatePayload s, ActionId a) const override;
  Transition true_evaluate(StatePayload s, ActionId a) const override;
  std::optional<std::size_t> state_space_bound() const override { return num_vertices_; }

  std::size_t vertex_count() const { return num_vertices_; }
  const std::vector<std::uint32_t>& goals() const { return goals_; }
  const std::vector<GraphEdgeSpec>& edges() const { return edges_; }
  /// The edge behind action `a` of vertex `v`.
  const GraphEdgeSpec& edge_for(std::uint32_t v, ActionId a) const { return edges_[out_[v][index(a)]]; }
  const std::vector<Cost>& heuristic_values() const { return heuristic_; }

  /// Same graph without any evaluation delay.
  ExplicitGraphDomain without_delay() const;

 private:
  std::size_t num_vertices_;
  std::uint32_t start_;
  std::vector<std::uint32_t> goals_;
  std::vector<bool> is_goal_;
  std::vector<GraphEdgeSpec> edges_;
  std::vector<std::vector<std::size_t>> out_;
  std::vector<Cost> heuristic_;
};

/// Graph file format:
///   num_vertices start_id goal_id[,goal_id...]
///   from to lazy_cost true_cost eval_delay_ms      (one line per edge)
/// Lines starting with '#' and blank lines are ignored; "inf" is accepted as
/// a cost. Throws ParseError (with line number) or ContractViolation.
ExplicitGraphDomain parse_graph(std::istream& in);
ExplicitGraphDomain load_graph(const std::filesystem::path& path);
std::string format_graph(const ExplicitGraphDomain& graph);

struct RandomGraphParams {
  std::size_t min_vertices = 8;
  std::size_t max_vertices = 60;
  double edge_density = 0.15;       // probability of each ordered pair
  double lazy_low = 0.3;            // lazy = true * U[lazy_low, lazy_high]
  double lazy_high = 1.0;
  double infeasible_fraction = 0.1;
  int min_true_cost = 1;            // true costs are integers in this range
  int max_true_cost = 20;
  /// The heuristic is scale * (lazy-cost distance to the goal), with scale
  /// drawn from [heuristic_scale_low, 1]. 0 disables it.
  double heuristic_scale_low = 0.5;
  bool use_heuristic = true;
};

/// Seeded random instance: start is vertex 0, the goal is the last vertex.
ExplicitGraphDomain random_graph(const RandomGraphParams& params, std::uint64_t seed);

/// Distance from every vertex to the nearest goal over lazy costs.
std::vector<Cost> lazy_distance_to_goal(std::size_t num_vertices, const std::vector<GraphEdgeSpec>& edges,
                                        const std::vector<std::uint32_t>& goals);

}  // namespace mplp
