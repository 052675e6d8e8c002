#include <doctest.h>

#include <sstream>

#include "fixtures.hpp"
#include "mplp/domains/grid_nav.hpp"
#include "mplp/errors.hpp"
#include "mplp/planners.hpp"

using namespace mplp;

namespace {

PlannerConfig config(double eps, int threads, MonitorMode mode) {
  PlannerConfig c;
  c.eps_h = eps;
  c.n_threads = threads;
  c.mode = mode;
  c.time_limit_s = 30;
  return c;
}

}  // namespace

TEST_CASE("plan_mplp on fixture D finds the optimum 4") {
  const auto d = fixtures::fixture_d();
  for (MonitorMode mode : {MonitorMode::Strict, MonitorMode::Diversify}) {
    for (int threads : {3, 4, 8}) {
      CAPTURE(threads);
      const PlanResult r = plan_mplp(d, config(1.0, threads, mode));
      REQUIRE(r.solved());
      CHECK(r.true_cost == 4);
      CHECK(r.path == std::vector<StatePayload>{fixtures::kS0, fixtures::kB, fixtures::kGoal});
      CHECK(r.stats.lifecycle_consistent);
      CHECK(r.stats.max_evaluations_per_edge <= 1);
      CHECK(r.stats.edges_evaluated <= r.stats.edges_discovered);
    }
  }
}

TEST_CASE("plan_mplp strict trace on fixture D is 2 then 4") {
  const auto d = fixtures::fixture_d(5.0);
  const PlanResult r = plan_mplp(d, config(1.0, 3, MonitorMode::Strict));
  REQUIRE(r.solved());
  REQUIRE(!r.stats.goal_g_trace.empty());
  CHECK(r.stats.goal_g_trace.front() == 2);
  CHECK(r.stats.goal_g_trace.back() == 4);
  CHECK(std::is_sorted(r.stats.goal_g_trace.begin(), r.stats.goal_g_trace.end()));
}

TEST_CASE("plan_mplp on fixture I reports NoPath after evaluating everything") {
  const auto d = fixtures::fixture_i();
  for (MonitorMode mode : {MonitorMode::Strict, MonitorMode::Diversify}) {
    const PlanResult r = plan_mplp(d, config(1.0, 4, mode));
    CHECK(r.outcome == PlanOutcome::NoPath);
    CHECK(r.stats.fully_evaluated);
    CHECK(r.stats.edges_evaluated == r.stats.edges_discovered);
    CHECK(r.stats.edges_evaluated == 4);
  }
}

TEST_CASE("plan_mplp with evaluate_all drains every discovered edge") {
  const auto d = random_graph(RandomGraphParams{}, 3);
  PlannerConfig c = config(1.5, 5, MonitorMode::Diversify);
  c.evaluate_all = true;
  const PlanResult r = plan_mplp(d, c);
  CHECK(r.stats.fully_evaluated);
  CHECK(r.stats.edges_evaluated == r.stats.edges_discovered);
}

TEST_CASE("plan_mplp configuration errors") {
  const auto d = fixtures::fixture_d();
  CHECK_THROWS_AS(plan_mplp(d, config(1.0, 2, MonitorMode::Strict)), ConfigError);
  CHECK_THROWS_AS(plan_mplp(d, config(0.9, 3, MonitorMode::Strict)), ConfigError);
  PlannerConfig c = config(1.0, 3, MonitorMode::Diversify);
  c.kappa = 0.5;
  CHECK_THROWS_AS(plan_mplp(d, c), ConfigError);
  CHECK(worker_count_for(3) == 1);
  CHECK(worker_count_for(16) == 13);
}

TEST_CASE("plan_mplp surfaces domain contract violations") {
  class Cheating final : public Domain {
   public:
    StatePayload start() const override { return 0; }
    bool is_goal(StatePayload s) const override { return s == 1; }
    Cost heuristic(StatePayload) const override { return 0; }
    std::size_t action_count(StatePayload s) const override { return s == 0 ? 1 : 0; }
    Transition lazy_successor(StatePayload, ActionId) const override { return {1, 5}; }
    Transition true_evaluate(StatePayload, ActionId) const override { return {1, 3}; }
  } d;
  CHECK_THROWS_AS(plan_mplp(d, config(1.0, 3, MonitorMode::Strict)), DomainContractViolation);
}

TEST_CASE("plan_mplp times out on a slow instance") {
  const auto d = fixtures::fixture_d(400.0);
  PlannerConfig c = config(1.0, 3, MonitorMode::Strict);
  c.time_limit_s = 0.05;
  const PlanResult r = plan_mplp(d, c);
  CHECK(r.outcome == PlanOutcome::Timeout);
  CHECK(r.stats.wall_time_s < 1.0);
}

TEST_CASE("start inside the goal region is solved at cost 0") {
  const ExplicitGraphDomain d(1, 0, {0}, {});
  CHECK(plan_mplp(d, config(1.0, 3, MonitorMode::Strict)).true_cost == 0);
  CHECK(plan_wastar(d, 1.0).true_cost == 0);
  CHECK(plan_lwastar(d, 1.0).true_cost == 0);
  CHECK(plan_lsp(d, 1.0).true_cost == 0);
  CHECK(plan_pwastar(d, 1.0, 2).true_cost == 0);
  CHECK(optimal_cost_oracle(d) == 0);
}

TEST_CASE("plan_wastar") {
  CHECK(plan_wastar(fixtures::fixture_d(), 1.0).true_cost == 4);
  const PlanResult w3 = plan_wastar(fixtures::fixture_d(), 3.0);
  REQUIRE(w3.solved());
  CHECK(w3.true_cost <= 12);
  CHECK(w3.true_cost == 4);
  CHECK(plan_wastar(fixtures::fixture_i(), 1.0).outcome == PlanOutcome::NoPath);
}

TEST_CASE("plan_lwastar on fixture D evaluates at most 4 edges") {
  const PlanResult r = plan_lwastar(fixtures::fixture_d(), 1.0);
  REQUIRE(r.solved());
  CHECK(r.true_cost == 4);
  CHECK(r.stats.edges_evaluated <= 4);
  CHECK(plan_lwastar(fixtures::fixture_i(), 1.0).outcome == PlanOutcome::NoPath);
}

TEST_CASE("plan_lwastar with exact lazy costs expands like WA*") {
  RandomGraphParams p;
  p.lazy_low = p.lazy_high = 1.0;
  p.infeasible_fraction = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto d = random_graph(p, seed);
    const PlanResult a = plan_wastar(d, 1.0);
    const PlanResult b = plan_lwastar(d, 1.0);
    CHECK(a.outcome == b.outcome);
    CHECK(a.path == b.path);
    CHECK(a.stats.expansions == b.stats.expansions);
  }
}

TEST_CASE("plan_lsp on fixture D evaluates exactly 4 edges in 2 rounds") {
  const PlanResult r = plan_lsp(fixtures::fixture_d(), 1.0);
  REQUIRE(r.solved());
  CHECK(r.true_cost == 4);
  CHECK(r.stats.edges_evaluated == 4);
  CHECK(r.stats.goal_g_trace == std::vector<Cost>{2, 4, 4});
  CHECK(r.stats.max_evaluations_per_edge == 1);

  const PlanResult none = plan_lsp(fixtures::fixture_i(), 1.0);
  CHECK(none.outcome == PlanOutcome::NoPath);
  CHECK(none.stats.edges_evaluated == 4);
}

TEST_CASE("plan_pwastar matches WA*") {
  CHECK(plan_pwastar(fixtures::fixture_d(), 1.0, 2).true_cost == 4);
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const auto d = random_graph(RandomGraphParams{}, seed);
    const PlanResult a = plan_wastar(d, 2.0);
    const PlanResult b = plan_pwastar(d, 2.0, 3);
    CHECK(a.outcome == b.outcome);
    CHECK(a.true_cost == b.true_cost);
  }
}

TEST_CASE("optimal_cost_oracle") {
  CHECK(optimal_cost_oracle(fixtures::fixture_d()) == 4);
  CHECK(optimal_cost_oracle(fixtures::fixture_i()) == kInfiniteCost);
  CHECK(optimal_cost_oracle(ExplicitGraphDomain(2, 0, {1}, {{0, 1, 7, 7, 0}})) == 7);
  CHECK_THROWS_AS(optimal_cost_oracle(fixtures::fixture_d(), 3), GraphTooLarge);
}

TEST_CASE("oracle agrees with independent references on random graphs") {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto d = random_graph(RandomGraphParams{}, seed);
    CHECK(optimal_cost_oracle(d) == fixtures::bellman_ford_optimum(d));
  }
  RandomGraphParams small;
  small.min_vertices = 4;
  small.max_vertices = 9;
  small.edge_density = 0.35;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto d = random_graph(small, seed);
    CHECK(optimal_cost_oracle(d) == fixtures::exhaustive_optimum(d));
  }
}

TEST_CASE("baselines satisfy their bounds on random graphs") {
  for (std::uint64_t seed = 0; seed < 80; ++seed) {
    const auto d = random_graph(RandomGraphParams{}, seed);
    const Cost opt = fixtures::bellman_ford_optimum(d);
    for (double w : {1.0, 1.5, 5.0}) {
      for (const PlanResult& r : {plan_wastar(d, w), plan_lwastar(d, w), plan_lsp(d, w), plan_pwastar(d, w, 2)}) {
        if (opt == kInfiniteCost) {
          CHECK(r.outcome == PlanOutcome::NoPath);
          continue;
        }
        REQUIRE(r.solved());
        CHECK(r.true_cost <= w * opt);
        if (w == 1.0) CHECK(r.true_cost == opt);
        CHECK(path_true_cost(d, r.actions) == r.true_cost);
      }
    }
  }
}

TEST_CASE("plan_mplp stays within the bound on a small grid") {
  const OccupancyGrid grid = random_map(12, 12, 0.2, 5, 0.05);
  // First free cell pair far apart.
  GridPose start{0, 0, 0};
  int gx = 11, gy = 11;
  for (int i = 0; i < 12 && !grid.free(start.x, start.y); ++i) start.x = i;
  for (int i = 11; i >= 0 && !grid.free(gx, gy); --i) gx = i;
  const GridNavDomain d(grid, start, gx, gy, {0.0125, 16, 0});
  const Cost opt = optimal_cost_oracle(d);
  for (MonitorMode mode : {MonitorMode::Strict, MonitorMode::Diversify}) {
    for (double eps : {1.0, 2.0}) {
      const PlanResult r = plan_mplp(d, config(eps, 6, mode));
      if (opt == kInfiniteCost) {
        CHECK(r.outcome == PlanOutcome::NoPath);
      } else {
        REQUIRE(r.solved());
        CHECK(r.true_cost <= eps * opt);
        CHECK(path_true_cost(d, r.actions) == doctest::Approx(r.true_cost));
      }
    }
  }
}
