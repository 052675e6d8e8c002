#include <doctest.h>

#include <random>

#include "fixtures.hpp"
#include "mplp/errors.hpp"
#include "mplp/evaluator.hpp"
#include "mplp/planners.hpp"
#include "mplp/search.hpp"

using namespace mplp;

namespace {

std::vector<std::uint32_t> vertex_chain(const LazyGraph& g, const GoalPath& p) {
  std::vector<std::uint32_t> out;
  for (EdgeId e : p.edges) out.push_back(static_cast<std::uint32_t>(g.payload(g.edge(e).successor())));
  return out;
}

/// Evaluates every cached edge with a finite lazy cost, in id order.
void evaluate_everything(const Domain& d, LazyGraph& g) {
  while (auto e = g.open_pop_max()) apply_evaluation(*e, evaluate_one(*e, d, g).true_cost, g);
}

}  // namespace

TEST_CASE("key substitutes g + w*h") {
  StateRecord s;
  s.g_val = 3;
  s.h_val = 2;
  CHECK(key(s, 2) == SearchKey{7, 3});
  s.g_val = 0;
  s.h_val = 0;
  CHECK(key(s, 50) == SearchKey{0, 0});
  s.g_val = 4;
  s.h_val = 1.5;
  CHECK(key(s, 1) == SearchKey{5.5, 4});
}

TEST_CASE("edge_base_priority is the constant 1") {
  CHECK(edge_base_priority(EdgeId{0}) == 1);
  CHECK(edge_base_priority(EdgeId{7}) == edge_base_priority(EdgeId{3}));
}

TEST_CASE("one inflation raises a new edge to priority 2") {
  const auto d = fixtures::fixture_d();
  LazyGraph g;
  const auto ids = fixtures::cache_all_edges(d, g);
  g.open_push(ids[0], edge_base_priority(ids[0]));
  g.inflate_priority(ids[0]);
  CHECK(g.edge(ids[0]).priority() == 2);
}

TEST_CASE("compute_path on fixture D") {
  const auto d = fixtures::fixture_d();
  LazyGraph g;
  LazySearch search(d, g, 1.0);

  const SearchOutcome first = search.compute_path(CostView::Underestimate);
  REQUIRE(first.reached());
  CHECK(first.path.goal_g == 2);
  CHECK(vertex_chain(g, first.path) == std::vector<std::uint32_t>{fixtures::kA, fixtures::kGoal});
  CHECK(first.stats.new_edges == 4);

  // Evaluate e3 only (cost 10).
  const EdgeId e3 = first.path.edges[1];
  g.take_for_evaluation(e3);
  apply_evaluation(e3, evaluate_one(e3, d, g).true_cost, g);

  const SearchOutcome second = search.compute_path(CostView::Underestimate);
  REQUIRE(second.reached());
  CHECK(second.path.goal_g == 4);
  CHECK(vertex_chain(g, second.path) == std::vector<std::uint32_t>{fixtures::kB, fixtures::kGoal});
  CHECK(second.stats.new_edges == 0);
  CHECK(second.stats.cache_hits > 0);
}

TEST_CASE("expand on fixture D generates and relaxes the start's edges") {
  const auto d = fixtures::fixture_d();
  LazyGraph g;
  LazySearch search(d, g, 1.0);
  search.begin_pass(CostView::Underestimate);
  search.expand(search.start());
  CHECK(g.counts().pushed == 2);
  const StateId a = *g.find_state(fixtures::kA);
  const StateId b = *g.find_state(fixtures::kB);
  CHECK(search.record(a).g_val == 1);
  CHECK(search.record(b).g_val == 2);
  CHECK(search.record(a).parent_edge == g.edge_id({search.start(), ActionId{0}}));
  CHECK(search.record(search.start()).v_val == 0);

  // Second pass: edges come from the cache.
  search.begin_pass(CostView::Underestimate);
  search.expand(search.start());
  CHECK(g.counts().pushed == 2);
  CHECK(search.record(a).g_val == 1);
}

TEST_CASE("update_state keeps the cheapest parent") {
  // s0 -> x (3), s0 -> y (1), x -> t (2), y -> t (6): t reached via x at 5.
  ExplicitGraphDomain d(4, 0, {3}, {{0, 1, 3, 3, 0}, {0, 2, 1, 1, 0}, {1, 3, 2, 2, 0}, {2, 3, 6, 6, 0}});
  LazyGraph g;
  LazySearch search(d, g, 1.0);
  const SearchOutcome out = search.compute_path(CostView::Underestimate);
  REQUIRE(out.reached());
  CHECK(out.path.goal_g == 5);
  CHECK(g.payload(g.edge(out.path.edges[0]).successor()) == 1);

  // Relaxing a worse edge leaves the record alone; a better one replaces it.
  search.begin_pass(CostView::Underestimate);
  search.expand(search.start());
  const StateId x = *g.find_state(1);
  const StateId y = *g.find_state(2);
  const StateId t = *g.find_state(3);
  search.expand(y);  // t: 1 + 6 = 7
  CHECK(search.record(t).g_val == 7);
  search.expand(x);  // t: 3 + 2 = 5
  CHECK(search.record(t).g_val == 5);
  CHECK(search.in_open(t));
  search.update_state(t, g.edge_id({y, ActionId{0}}), 6);
  CHECK(search.record(t).g_val == 5);
}

TEST_CASE("all lazy-infinite actions push nothing") {
  ExplicitGraphDomain d(3, 0, {2}, {{0, 1, kInfiniteCost, kInfiniteCost, 0}, {0, 2, kInfiniteCost, kInfiniteCost, 0}});
  LazyGraph g;
  LazySearch search(d, g, 1.0);
  const SearchOutcome out = search.compute_path(CostView::Underestimate);
  CHECK(out.kind == SearchOutcome::Kind::Exhausted);
  CHECK(g.counts().pushed == 0);
  CHECK(g.edge_count() == 2);
}

TEST_CASE("unreachable goal is Exhausted") {
  ExplicitGraphDomain d(3, 0, {2}, {{0, 1, 1, 1, 0}, {1, 0, 1, 1, 0}});
  LazyGraph g;
  LazySearch search(d, g, 2.0);
  CHECK(search.compute_path(CostView::Underestimate).kind == SearchOutcome::Kind::Exhausted);
}

TEST_CASE("weight must be finite and at least 1") {
  const auto d = fixtures::fixture_d();
  LazyGraph g;
  CHECK_THROWS_AS(LazySearch(d, g, 0.5), ConfigError);
  CHECK_THROWS_AS(LazySearch(d, g, kInfiniteCost), ConfigError);
}

TEST_CASE("stop token interrupts a pass") {
  const auto d = fixtures::fixture_d();
  LazyGraph g;
  LazySearch search(d, g, 1.0);
  std::stop_source src;
  src.request_stop();
  CHECK(search.compute_path(CostView::Underestimate, src.get_token()).kind == SearchOutcome::Kind::Interrupted);
}

TEST_CASE("fully evaluated graph: w=1 matches the reference optimum, w>1 stays within the bound") {
  RandomGraphParams params;
  for (std::uint64_t seed = 0; seed < 150; ++seed) {
    const auto d = random_graph(params, seed);
    const double reference = fixtures::bellman_ford_optimum(d);
    for (double w : {1.0, 1.5, 5.0}) {
      LazyGraph g;
      LazySearch search(d, g, w);
      // Repeat until a pass touches only evaluated edges.
      SearchOutcome out;
      do {
        evaluate_everything(d, g);
        out = search.compute_path(CostView::Underestimate);
      } while (out.stats.new_edges > 0);
      if (reference == kInfiniteCost) {
        CHECK_FALSE(out.reached());
        continue;
      }
      REQUIRE(out.reached());
      if (w == 1.0) {
        CHECK(out.path.goal_g == reference);
      } else {
        CHECK(out.path.goal_g <= w * reference);
      }
      Cost sum = 0;
      for (EdgeId e : out.path.edges) sum += g.current_cost(e);
      CHECK(sum == out.path.goal_g);
    }
  }
}

TEST_CASE("no state is expanded twice in a pass and pushed edges are cached") {
  RandomGraphParams params;
  params.use_heuristic = true;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto d = random_graph(params, seed);
    LazyGraph g;
    LazySearch search(d, g, 1.0);
    const SearchOutcome out = search.compute_path(CostView::Underestimate);
    CHECK(out.stats.expansions <= g.state_count());
    const auto c = g.counts();
    CHECK(c.pushed <= g.edge_count());
    CHECK(g.lifecycle_consistent());
  }
}
