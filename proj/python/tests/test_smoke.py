import math

import pytest

import mplp

FIXTURE_D = """# s0=0 a=1 b=2 goal=3
4 0 3
0 1 1 2 0
0 2 2 2 0
1 3 1 10 0
2 3 2 2 0
"""


def fixture_d():
    return mplp.parse_graph(FIXTURE_D)


@pytest.mark.parametrize("mode", [mplp.MonitorMode.Strict, mplp.MonitorMode.Diversify])
def test_mplp_fixture_d(mode):
    r = mplp.plan_mplp(fixture_d(), mplp.PlannerConfig(eps_h=1.0, n_threads=4, mode=mode))
    assert r.solved
    assert r.outcome == mplp.PlanOutcome.Solved
    assert r.true_cost == 4
    assert r.path == [0, 2, 3]
    assert r.stats.max_evaluations_per_edge <= 1


def test_baselines_and_oracle_agree():
    d = fixture_d()
    assert mplp.optimal_cost_oracle(d) == 4
    for plan in (mplp.plan_wastar, mplp.plan_lwastar, mplp.plan_lsp):
        r = plan(d, 1.0)
        assert r.true_cost == 4
        assert mplp.path_true_cost(d, r.actions) == 4
    assert mplp.plan_pwastar(d, 1.0, 2).true_cost == 4
    assert mplp.plan_lsp(d, 1.0).stats.edges_evaluated == 4


def test_no_path():
    d = mplp.ExplicitGraphDomain(3, 0, [2], [(0, 1, 1, 1, 0), (1, 2, 1, math.inf, 0)])
    assert mplp.plan_mplp(d).outcome == mplp.PlanOutcome.NoPath
    assert mplp.optimal_cost_oracle(d) == mplp.INF


def test_errors_map_to_python_exceptions():
    with pytest.raises(mplp.ConfigError):
        mplp.plan_mplp(fixture_d(), mplp.PlannerConfig(n_threads=2))
    with pytest.raises(mplp.ContractViolation):
        mplp.parse_graph("2 0 1\n0 1 5 3 0\n")
    with pytest.raises(mplp.ParseError):
        mplp.parse_map("3 2 0.05\n...\n..\n")
    assert issubclass(mplp.ConfigError, mplp.Error)


def test_random_graph_bound():
    for seed in range(20):
        d = mplp.random_graph(seed)
        opt = mplp.optimal_cost_oracle(d)
        r = mplp.plan_mplp(d, mplp.PlannerConfig(eps_h=2.0, n_threads=5, mode=mplp.MonitorMode.Diversify))
        if math.isinf(opt):
            assert r.outcome == mplp.PlanOutcome.NoPath
        else:
            assert r.true_cost <= 2.0 * opt


def test_grid_domain():
    grid = mplp.parse_map("5 3 0.05\n.....\n..#..\n.....\n")
    assert grid.free_count() == 14
    d = mplp.GridNavDomain(grid, mplp.GridPose(0, 1, 0), 4, 1)
    assert len(d.primitive_names) == 18
    fwd4 = d.primitive_names.index("forward_4")
    succ, lazy = d.lazy_successor(d.start(), fwd4)
    assert lazy == pytest.approx(0.2)
    assert d.true_evaluate(d.start(), fwd4) == (succ, math.inf)
    r = mplp.plan_mplp(d, mplp.PlannerConfig(n_threads=4))
    assert r.solved
    assert r.true_cost == pytest.approx(mplp.optimal_cost_oracle(d))


def test_bench_rows_round_trip(tmp_path):
    path = tmp_path / "d.graph"
    path.write_text(FIXTURE_D)
    spec = mplp.TrialSpec()
    spec.domain = mplp.DomainKind.Graph
    spec.graph_path = str(path)
    rows = mplp.run_trials(spec)
    assert len(rows) == 1
    assert rows[0].solution_cost == 4
    assert rows[0].bound_ok
    csv = mplp.format_csv(rows)
    assert csv.splitlines()[0].split(",") == mplp.trial_row_fields()
    assert mplp.parse_csv(csv) == rows
    assert round(mplp.speedup(3.55, 0.23), 2) == 15.43
