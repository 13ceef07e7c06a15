"""Step rules and run drivers."""

import numpy as np
import pytest

from gdpolyak import algorithms, core, problems


def _cfg(eta=1.0, tau=0.15, iters=100, kind="distance", thr=1e-6, gzt=0.0):
    return core.RunConfig(
        eta=eta,
        tau=tau,
        max_iters=iters,
        stop=core.StopRule(kind, thr),
        grad_zero_tol=gzt,
    )


def test_gd_step_oracles():
    quad = problems.make_quadratic_1d()
    assert algorithms.gd_step(quad, np.array([1.0]), 1.0)[0] == 0.0
    assert abs(algorithms.gd_step(quad, np.array([1.0]), 0.1)[0] - 0.9) <= 1e-15
    cq = problems.make_convex_quartic()
    np.testing.assert_allclose(
        algorithms.gd_step(cq, np.array([0.0, 1.0]), 0.1), [-0.1, 0.2], atol=1e-15
    )
    with pytest.raises(ValueError):
        algorithms.gd_step(quad, np.array([1.0]), 0.0)


def test_polyak_step_oracles():
    quad = problems.make_quadratic_1d()
    assert algorithms.polyak_step(quad, np.array([2.0]))[0] == 1.0
    quart = problems.make_quartic_1d()
    assert algorithms.polyak_step(quart, np.array([1.0]))[0] == 0.75
    assert algorithms.polyak_step(quart, np.array([1.0]), scale=0.5)[0] == 0.875
    with pytest.raises(core.ZeroGradient):
        algorithms.polyak_step(quart, np.array([0.0]))


def test_polyak_halves_quadratic_and_contracts_quartic():
    quad = problems.make_quadratic_1d()
    quart = problems.make_quartic_1d()
    for x in (4.0, 1.0, 1e-3):
        assert abs(algorithms.polyak_step(quad, np.array([x]))[0] / (x / 2) - 1) <= 1e-15
        assert abs(algorithms.polyak_step(quart, np.array([x]))[0] / (0.75 * x) - 1) <= 1e-15


def test_adaptive_trigger_dichotomy_on_pure_quartic():
    quart = problems.make_quartic_1d()
    # R = 4^{-4/3} = 0.1574... > 0.15 -> all Polyak, iterates 0.75^k
    t = algorithms.run_adaptive(quart, np.array([1.0]), _cfg(tau=0.15, iters=20, thr=1e-30))
    assert set(t.step_kinds()) == {"polyak"}
    for k, x in enumerate(t.iterates):
        assert abs(x[0] - 0.75 ** k) <= 1e-12
    # threshold above the constant -> all GD
    t = algorithms.run_gd(quart, np.array([1.0]), 0.1, _cfg(iters=20, thr=1e-30))
    t2 = algorithms.run_adaptive(quart, np.array([1.0]), _cfg(eta=0.1, tau=0.16, iters=20, thr=1e-30))
    assert set(t2.step_kinds()) == {"gradient"}
    np.testing.assert_array_equal(
        [x[0] for x in t.iterates], [x[0] for x in t2.iterates]
    )


def test_tie_fires_polyak():
    quart = problems.make_quartic_1d()
    tau = core.ratio_R(quart, np.array([1.0]))  # exact tie R == tau
    t = algorithms.run_adaptive(quart, np.array([1.0]), _cfg(tau=tau, iters=3, thr=1e-30))
    assert t.records[0].step_kind == "polyak"


def test_gd_sublinear_on_quartic():
    quart = problems.make_quartic_1d()
    t = algorithms.run_gd(quart, np.array([1.0]), 0.1, _cfg(iters=10**4, thr=1e-30))
    assert abs(t.final().distance) > 1e-3  # ~ (0.8 k)^{-1/2} decay


def test_gd_divergence_raises():
    cq = problems.make_convex_quartic()
    with pytest.raises(core.NonFinite):
        algorithms.run_gd(cq, np.array([0.0, 1.0]), 10.0, _cfg(iters=200, thr=1e-30))


def test_gd_divergence_truncation():
    cq = problems.make_convex_quartic()
    t = algorithms.run_gd(
        cq, np.array([0.0, 1.0]), 10.0, _cfg(iters=200, thr=1e-30),
        truncate_on_divergence=True,
    )
    assert t.terminated_by == "budget"
    assert 0 < len(t.records) < 200
    assert all(np.isfinite(r.f_val) for r in t.records)


def test_run_polyak_sequences():
    quad = problems.make_quadratic_1d()
    t = algorithms.run_polyak(quad, np.array([4.0]), _cfg(iters=3, thr=1e-30))
    np.testing.assert_allclose([x[0] for x in t.iterates], [4.0, 2.0, 1.0, 0.5])


def test_block_schedule_pattern():
    quart = problems.make_quartic_1d()
    sched = algorithms.BlockSchedule(gd_stepsize=0.1, block_len=2)
    t = algorithms.run_block_gdpolyak(quart, np.array([1.0]), sched, _cfg(iters=9, thr=1e-30))
    kinds = [r.step_kind for r in t.records[:-1]]
    assert kinds == ["gradient", "gradient", "polyak"] * 3
    with pytest.raises(ValueError):
        algorithms.BlockSchedule(gd_stepsize=0.1, block_len=0)
    with pytest.raises(ValueError):
        algorithms.BlockSchedule(gd_stepsize=0.0, block_len=1)


def test_block_len1_unit_step_on_quadratic():
    quad = problems.make_quadratic_1d()
    sched = algorithms.BlockSchedule(gd_stepsize=1.0, block_len=1)
    t = algorithms.run_block_gdpolyak(
        quad, np.array([1.0]), sched, _cfg(iters=5, thr=1e-30, gzt=1e-14)
    )
    # the unit GD step lands exactly on the minimizer; the stop rule sees it first
    assert t.terminated_by == "stop_rule"
    assert t.records[-1].f_val == 0.0


def test_adaptive_reaches_target_on_convex_quartic():
    cq = problems.make_convex_quartic()
    t = algorithms.run_adaptive(cq, np.array([0.5, 0.5]), _cfg(iters=200))
    assert t.terminated_by == "stop_rule"
    assert t.final().distance <= 1e-6


def test_distance_monotone_on_convex_quartic():
    cq = problems.make_convex_quartic()
    t = algorithms.run_adaptive(cq, np.array([0.5, 0.5]), _cfg(iters=300))
    norms = [np.linalg.norm(x) for x in t.iterates]
    assert all(b <= a * (1 + 1e-12) for a, b in zip(norms, norms[1:]))


def test_stop_rules():
    cq = problems.make_convex_quartic()
    t = algorithms.run_adaptive(cq, np.array([0.5, 0.5]), _cfg(kind="value_gap", thr=1e-12, iters=300))
    assert t.terminated_by == "stop_rule" and t.final().f_val <= 1e-12
    t = algorithms.run_adaptive(cq, np.array([0.5, 0.5]), _cfg(kind="gradient_norm", thr=1e-8, iters=300))
    assert t.terminated_by == "stop_rule" and t.final().grad_norm <= 1e-8
    t = algorithms.run_adaptive(cq, np.array([0.5, 0.5]), _cfg(iters=5, thr=1e-30))
    assert t.terminated_by == "budget" and t.iterations() == 5


def test_trace_indices_consecutive():
    cq = problems.make_convex_quartic()
    t = algorithms.run_adaptive(cq, np.array([0.5, 0.5]), _cfg(iters=50, thr=1e-30))
    assert [r.k for r in t.records] == list(range(len(t.records)))


def test_wrapper_equals_half_polyak_when_floor_exact():
    quart = problems.make_quartic_1d()
    cfg = _cfg(iters=30, thr=1e-30)
    traces, states = algorithms.run_lower_bound_wrapper(
        quart, np.array([1.0]), cfg, h0=0.0, outer_epochs=1
    )
    ref = algorithms.run_adaptive(quart, np.array([1.0]), cfg, polyak_scale=0.5)
    np.testing.assert_array_equal(
        [x[0] for x in traces[0].iterates], [x[0] for x in ref.iterates]
    )
    assert states[0].h_hat == 0.5 * states[0].best_value


def test_wrapper_halves_gap_on_pure_quartic():
    quart = problems.make_quartic_1d()
    cfg = _cfg(iters=200, thr=1e-30)
    _, states = algorithms.run_lower_bound_wrapper(
        quart, np.array([1.0]), cfg, h0=-1.0, outer_epochs=10
    )
    for s in states:
        assert s.h_hat >= -(2.0 ** (-s.epoch + 1))
        assert s.h_hat <= 1e-12  # never exceeds the true optimal value 0
    hs = [s.h_hat for s in states]
    assert all(b >= a for a, b in zip(hs, hs[1:]))  # nondecreasing


def test_wrapper_invalid_lower_bound():
    quart = problems.make_quartic_1d()
    with pytest.raises(algorithms.InvalidLowerBound):
        algorithms.run_lower_bound_wrapper(
            quart, np.array([0.1]), _cfg(iters=10, thr=1e-30), h0=0.5, outer_epochs=1
        )


def test_wrapper_requires_positive_epochs():
    quart = problems.make_quartic_1d()
    with pytest.raises(ValueError):
        algorithms.run_lower_bound_wrapper(
            quart, np.array([1.0]), _cfg(), h0=0.0, outer_epochs=0
        )
