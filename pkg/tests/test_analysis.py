"""Finite-difference calculus, Hessian splits, and invariant audits."""

import warnings

import numpy as np
import pytest

from gdpolyak import algorithms, analysis, core, problems


def test_fd_gradient_oracles():
    quad = problems.make_quadratic_1d()
    assert abs(analysis.fd_gradient(quad, np.array([1.0]))[0] - 1.0) <= 1e-10
    cq = problems.make_convex_quartic()
    g = analysis.fd_gradient(cq, np.array([0.0, 1.0]))
    assert np.linalg.norm(g - [1.0, 8.0]) / np.linalg.norm([1.0, 8.0]) <= 1e-6
    const = core.Objective(
        name="const", dim=2, value=lambda x: 1.0,
        gradient=lambda x: np.zeros(2), optimal_value=1.0,
    )
    assert np.all(analysis.fd_gradient(const, np.zeros(2)) == 0.0)


def test_fd_hessian_oracles():
    for pid in ("convex_quartic", "nonconvex_quartic"):
        obj = problems.make_problem(pid)
        H = analysis.fd_hessian(obj, np.zeros(2))
        assert np.max(np.abs(H - np.diag([1.0, 0.0]))) <= 1e-6
    quad = problems.make_quadratic_1d()
    H = analysis.fd_hessian(quad, np.array([0.3]))
    assert abs(H[0, 0] - 1.0) <= 1e-8
    # symmetry by construction
    obj = problems.make_quartic_rosenbrock()
    H = analysis.fd_hessian(obj, np.array([0.2, 0.7]))
    np.testing.assert_array_equal(H, H.T)


def test_eigen_split_oracles():
    s = analysis.eigen_split(np.diag([1.0, 0.0]), null_tol=1e-8)
    np.testing.assert_allclose(s.P, np.diag([1.0, 0.0]), atol=1e-12)
    np.testing.assert_allclose(s.Q, np.diag([0.0, 1.0]), atol=1e-12)
    assert s.mu == pytest.approx(1.0)
    assert s.null_dim == 1

    with pytest.warns(UserWarning):
        s = analysis.eigen_split(np.eye(2), null_tol=1e-8)
    assert s.null_dim == 0
    np.testing.assert_allclose(s.P, np.eye(2), atol=1e-12)

    s = analysis.eigen_split(np.diag([2.0, 0.0]))
    assert s.mu == pytest.approx(2.0) and s.null_dim == 1

    with pytest.raises(analysis.AllNull):
        analysis.eigen_split(np.zeros((2, 2)))


def test_eigen_split_projector_algebra():
    rng = np.random.default_rng(4)
    for _ in range(5):
        B = rng.standard_normal((5, 3))
        H = B @ B.T  # rank <= 3, PSD
        s = analysis.eigen_split(H)
        assert np.max(np.abs(s.P @ s.P - s.P)) <= 1e-10
        assert np.max(np.abs(s.Q @ s.Q - s.Q)) <= 1e-10
        assert np.max(np.abs(s.P + s.Q - np.eye(5))) <= 1e-10
        assert np.max(np.abs(s.P @ s.Q)) <= 1e-10
        assert np.linalg.norm(H @ s.Q, 2) <= 10 * s.null_tol
        assert s.mu > s.null_tol


def test_third_form_oracles():
    e_v, e_u = np.array([1.0, 0.0]), np.array([0.0, 1.0])
    ncq = problems.make_nonconvex_quartic()
    val = analysis.third_form(ncq, np.zeros(2), e_u, e_u, e_v)
    assert abs(val - 2.0) <= 1e-4
    cq = problems.make_convex_quartic()
    for c in (e_v, e_u, np.array([0.6, 0.8])):
        assert abs(analysis.third_form(cq, np.zeros(2), e_u, e_u, c)) <= 1e-5


def test_third_form_permutation_symmetry():
    rng = np.random.default_rng(2)
    for pid in problems.PROBLEM_IDS:
        obj = problems.make_problem(pid)
        x = 0.1 * rng.standard_normal(obj.dim)
        a, b, c = (rng.standard_normal(obj.dim) for _ in range(3))
        vals = [
            analysis.third_form(obj, x, a, b, c),
            analysis.third_form(obj, x, b, c, a),
            analysis.third_form(obj, x, c, a, b),
        ]
        assert max(vals) - min(vals) <= 1e-3 * max(1.0, abs(vals[0]))


def test_check_vanishing_cubics():
    cq = problems.make_convex_quartic()
    split = analysis.eigen_split(analysis.fd_hessian(cq, np.zeros(2)))
    rep = analysis.check_vanishing_cubics(cq, split)
    assert rep.passed and rep.max_abs_cubic_uuw <= 1e-4

    ncq = problems.make_nonconvex_quartic()
    split = analysis.eigen_split(analysis.fd_hessian(ncq, np.zeros(2)))
    rep = analysis.check_vanishing_cubics(ncq, split)
    assert not rep.passed
    assert abs(rep.max_abs_cubic_uuw - 2.0) <= 1e-3

    quart = problems.make_quartic_1d()
    # null space is all of R^1 at the origin of x^4
    split = analysis.HessianSplit(
        H=np.zeros((1, 1)), eigvals=np.zeros(1), null_tol=1e-8,
        P=np.zeros((1, 1)), Q=np.eye(1), mu=0.0,
    )
    rep = analysis.check_vanishing_cubics(quart, split)
    assert rep.passed


def test_check_vanishing_cubics_empty_null():
    quad = problems.make_quadratic_1d()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        split = analysis.eigen_split(analysis.fd_hessian(quad, np.zeros(1)))
    with pytest.raises(analysis.EmptyNullSpace):
        analysis.check_vanishing_cubics(quad, split)


def test_proj_grad_sq():
    cq = problems.make_convex_quartic()
    split = analysis.eigen_split(analysis.fd_hessian(cq, np.zeros(2)))
    assert analysis.proj_grad_sq(cq, split, np.array([0.0, 1.0])) == pytest.approx(1.0)
    for v, u in problems.ravine_curve("convex_quartic", np.linspace(-0.5, 0.5, 20)):
        assert analysis.proj_grad_sq(cq, split, np.array([v, u])) == 0.0


def test_contraction_audit_quadratic_exact():
    quad = problems.make_quadratic_1d()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        split = analysis.eigen_split(analysis.fd_hessian(quad, np.zeros(1)))
    cfg = core.RunConfig(eta=0.5, tau=10.0, max_iters=10,
                         stop=core.StopRule("distance", 1e-12), record_G=True)
    t = algorithms.run_adaptive(quad, np.array([1.0]), cfg, split=split)
    ratios = analysis.contraction_audit(t, split=split, obj=quad)
    assert ratios, "expected gradient steps"
    for _, r in ratios:
        assert r == pytest.approx(0.25, rel=1e-12)  # (1 - 0.5)^2


def test_contraction_audit_all_polyak_empty():
    quart = problems.make_quartic_1d()
    split = analysis.HessianSplit(
        H=np.zeros((1, 1)), eigvals=np.zeros(1), null_tol=1e-8,
        P=np.eye(1), Q=np.zeros((1, 1)), mu=0.0,
    )
    cfg = core.RunConfig(eta=1.0, tau=0.15, max_iters=10,
                         stop=core.StopRule("distance", 1e-30), record_G=True)
    t = algorithms.run_adaptive(quart, np.array([1.0]), cfg, split=split)
    assert analysis.contraction_audit(t, split=split, obj=quart) == []


def test_contraction_audit_missing_g():
    quad = problems.make_quadratic_1d()
    cfg = core.RunConfig(eta=0.5, tau=10.0, max_iters=5,
                         stop=core.StopRule("distance", 1e-12))
    t = algorithms.run_adaptive(quad, np.array([1.0]), cfg)
    t.iterates = None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        split = analysis.eigen_split(analysis.fd_hessian(quad, np.zeros(1)))
    with pytest.raises(analysis.MissingG):
        analysis.contraction_audit(t, split=split, obj=quad)


def test_growth_estimate_oracles():
    quart = problems.make_quartic_1d()
    m0, _ = analysis.growth_estimate(quart, radius=0.5, n_samples=500, seed=0)
    assert abs(m0 - 1.0) <= 1e-12
    quad = problems.make_quadratic_1d()
    m0, worst = analysis.growth_estimate(quad, radius=0.5, n_samples=500, seed=0)
    assert abs(m0 - 2.0) <= 1e-6  # ratio minimized at the boundary radius
    cq = problems.make_convex_quartic()
    m0, _ = analysis.growth_estimate(cq, radius=0.5, n_samples=10**4, seed=0)
    assert m0 >= 0.2


def test_growth_estimate_deterministic():
    cq = problems.make_convex_quartic()
    a = analysis.growth_estimate(cq, radius=0.5, n_samples=1000, seed=9)
    b = analysis.growth_estimate(cq, radius=0.5, n_samples=1000, seed=9)
    assert a[0] == b[0] and np.array_equal(a[1], b[1])


def test_q_gradient_cubic_scaling():
    # ||Q grad f(t e_u)|| / t^3 stays in [4, 4.01] on the tested range
    cq = problems.make_convex_quartic()
    split = analysis.eigen_split(analysis.fd_hessian(cq, np.zeros(2)))
    for t in (0.2, 0.1, 0.05, 0.025):
        g = cq.gradient(np.array([0.0, t]))
        ratio = np.linalg.norm(split.Q @ g) / t ** 3
        assert 4.0 <= ratio <= 4.01
