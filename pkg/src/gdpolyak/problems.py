"""Benchmark objectives: two 2-d quartics with curved ravines, a quartic
Rosenbrock, and two overparameterized measurement problems.

All shipped problems are nonnegative with optimal value exactly 0.  The
random problems draw from `numpy.random.default_rng` (PCG64); matrices are
filled in row-major order, so traces are reproducible for a fixed seed.
"""

from __future__ import annotations

from typing import List, Sequence, Tuple

import numpy as np

from gdpolyak import _kernels as K
from gdpolyak.core import DimensionMismatch, Objective, euclid_distance


class UnknownProblem(Exception):
    pass


# ---------------------------------------------------------------------------
# Fixed 2-d problems
# ---------------------------------------------------------------------------

def convex_quartic_value_grad(x) -> Tuple[float, np.ndarray]:
    """f(v, u) = 0.5*(v + u^4)^2 + u^4; convex near the origin, ravine v = -u^4."""
    f, gv, gu = K.quartic2d_value_grad(K.CONVEX_QUARTIC, float(x[0]), float(x[1]))
    return f, np.array([gv, gu])


def nonconvex_quartic_value_grad(x) -> Tuple[float, np.ndarray]:
    """g(v, u) = 0.5*(v + u^2)^2 + u^4; quartic growth, ravine v = -u^2."""
    f, gv, gu = K.quartic2d_value_grad(K.NONCONVEX_QUARTIC, float(x[0]), float(x[1]))
    return f, np.array([gv, gu])


def quartic_rosenbrock_value_grad(x) -> Tuple[float, np.ndarray]:
    """f(x, y) = (1 - x)^2 + 100*(y - x^2)^4; minimizer (1, 1), singular Hessian there."""
    f, gx, gy = K.quartic2d_value_grad(K.QUARTIC_ROSENBROCK, float(x[0]), float(x[1]))
    return f, np.array([gx, gy])


def _convex_quartic_hessian(x):
    v, u = float(x[0]), float(x[1])
    w = v + u ** 4
    fvu = 4.0 * u ** 3
    fuu = 12.0 * u * u * w + 16.0 * u ** 6 + 12.0 * u * u
    return np.array([[1.0, fvu], [fvu, fuu]])


def _nonconvex_quartic_hessian(x):
    v, u = float(x[0]), float(x[1])
    w = v + u * u
    gvu = 2.0 * u
    guu = 2.0 * w + 16.0 * u * u
    return np.array([[1.0, gvu], [gvu, guu]])


def _quartic_rosenbrock_hessian(x):
    a, b = float(x[0]), float(x[1])
    w = b - a * a
    fxx = 2.0 - 800.0 * w ** 3 + 4800.0 * a * a * w * w
    fxy = -2400.0 * a * w * w
    fyy = 1200.0 * w * w
    return np.array([[fxx, fxy], [fxy, fyy]])


def _fixed_2d(name, kind, hessian, minimizer):
    m = np.asarray(minimizer, dtype=float)

    def value(x):
        return K.quartic2d_value_grad(kind, float(x[0]), float(x[1]))[0]

    def gradient(x):
        _, ga, gb = K.quartic2d_value_grad(kind, float(x[0]), float(x[1]))
        return np.array([ga, gb])

    def value_grad(x):
        f, ga, gb = K.quartic2d_value_grad(kind, float(x[0]), float(x[1]))
        return f, np.array([ga, gb])

    return Objective(
        name=name,
        dim=2,
        value=value,
        gradient=gradient,
        value_grad=value_grad,
        hessian=hessian,
        minimizer=m,
        optimal_value=0.0,
    )


def make_convex_quartic() -> Objective:
    return _fixed_2d("convex_quartic", K.CONVEX_QUARTIC, _convex_quartic_hessian, (0.0, 0.0))


def make_nonconvex_quartic() -> Objective:
    return _fixed_2d(
        "nonconvex_quartic", K.NONCONVEX_QUARTIC, _nonconvex_quartic_hessian, (0.0, 0.0)
    )


def make_quartic_rosenbrock() -> Objective:
    return _fixed_2d(
        "quartic_rosenbrock", K.QUARTIC_ROSENBROCK, _quartic_rosenbrock_hessian, (1.0, 1.0)
    )


def ravine_curve(problem_id: str, u_samples: Sequence[float]) -> List[Tuple[float, float]]:
    """Sample the slow-growth curve of one of the 2-d quartics as (v, u) pairs."""
    # v is computed with the same products the evaluation kernels use, so the
    # residual v + u^4 (resp. v + u^2) cancels exactly on the sampled points.
    if problem_id == "convex_quartic":
        return [(-((u * u) * (u * u)), float(u)) for u in (float(u) for u in u_samples)]
    if problem_id == "nonconvex_quartic":
        return [(-(u * u), float(u)) for u in (float(u) for u in u_samples)]
    raise UnknownProblem(f"no ravine curve for {problem_id!r}")


# ---------------------------------------------------------------------------
# 1-d presets (test problems; closed-form behavior under every step rule)
# ---------------------------------------------------------------------------

def make_quartic_1d() -> Objective:
    return Objective(
        name="quartic_1d",
        dim=1,
        value=lambda x: float(x[0]) ** 4,
        gradient=lambda x: np.array([4.0 * float(x[0]) ** 3]),
        hessian=lambda x: np.array([[12.0 * float(x[0]) ** 2]]),
        minimizer=np.zeros(1),
    )


def make_quadratic_1d() -> Objective:
    return Objective(
        name="quadratic_1d",
        dim=1,
        value=lambda x: 0.5 * float(x[0]) ** 2,
        gradient=lambda x: np.array([float(x[0])]),
        hessian=lambda x: np.array([[1.0]]),
        minimizer=np.zeros(1),
    )


# ---------------------------------------------------------------------------
# Overparameterized measurement problems
# ---------------------------------------------------------------------------

def procrustes_distance(X, X_star) -> float:
    """min over k x k orthogonal R of ||X R - [X_star | 0]||_F.

    Closed form via the singular values of X^T [X_star | 0]: the squared
    distance is ||X||_F^2 + ||X_star||_F^2 - 2 * sum of singular values.
    """
    X = np.asarray(X, dtype=float)
    B = np.asarray(X_star, dtype=float)
    if B.ndim == 1:
        B = B[:, None]
    if X.ndim == 1:
        if X.size % B.shape[0] != 0:
            raise DimensionMismatch(
                f"flat factor of size {X.size} does not reshape to {B.shape[0]} rows"
            )
        X = X.reshape(B.shape[0], -1)
    d, k = X.shape
    if B.shape[0] != d or B.shape[1] > k:
        raise DimensionMismatch(f"factor {X.shape} vs. target {B.shape}")
    sv = np.linalg.svd(X.T @ B, compute_uv=False)
    sq = float(np.sum(X * X) + np.sum(B * B) - 2.0 * np.sum(sv))
    return np.sqrt(max(sq, 0.0))


def _measurement_objective(name, A, b, X_true, k):
    """Shared construction for the quadratic-measurement losses."""
    d = A.shape[1]
    dim = d * k
    pad = np.zeros((d, k))
    pad[:, : X_true.shape[1]] = X_true

    def value_grad(x):
        f, G = K.sensing_value_grad(A, b, np.ascontiguousarray(x.reshape(d, k)))
        return f, np.asarray(G).ravel()

    return Objective(
        name=name,
        dim=dim,
        value=lambda x: value_grad(x)[0],
        gradient=lambda x: value_grad(x)[1],
        value_grad=value_grad,
        minimizer=pad.ravel(),
        distance=lambda x: procrustes_distance(x, X_true),
        optimal_value=0.0,
    )


def make_quadratic_sensing(d=10, r=1, k=3, m=200, seed=0) -> Objective:
    """Rank-overparameterized quadratic sensing (search rank k > true rank r).

    b_i = ||X_star^T a_i||^2 for Gaussian rows a_i and a ground truth with
    orthonormal columns; the loss grows quartically in the Procrustes
    distance once k exceeds r.
    """
    if k < r:
        raise ValueError("search rank k must be at least the true rank r")
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, d))
    X_star = np.linalg.qr(rng.standard_normal((d, r)))[0]
    b = np.einsum("ij,ij->i", A @ X_star, A @ X_star)
    return _measurement_objective("quadratic_sensing", A, b, X_star, k)


def make_single_neuron(d=10, k=3, m=200, seed=0) -> Objective:
    """Quadratic-activation single neuron: width-k student vs. unit teacher."""
    rng = np.random.default_rng(seed)
    A = rng.standard_normal((m, d))
    x_star = rng.standard_normal(d)
    x_star /= np.linalg.norm(x_star)
    b = (A @ x_star) ** 2
    return _measurement_objective("single_neuron", A, b, x_star[:, None], k)


# ---------------------------------------------------------------------------
# Registry
# ---------------------------------------------------------------------------

_FACTORIES = {
    "convex_quartic": lambda seed, **p: make_convex_quartic(),
    "nonconvex_quartic": lambda seed, **p: make_nonconvex_quartic(),
    "quartic_rosenbrock": lambda seed, **p: make_quartic_rosenbrock(),
    "quadratic_sensing": lambda seed, **p: make_quadratic_sensing(seed=seed, **p),
    "single_neuron": lambda seed, **p: make_single_neuron(seed=seed, **p),
    "quartic_1d": lambda seed, **p: make_quartic_1d(),
    "quadratic_1d": lambda seed, **p: make_quadratic_1d(),
}

PROBLEM_IDS = tuple(_FACTORIES)


def make_problem(problem_id: str, seed: int = 0, **params) -> Objective:
    try:
        factory = _FACTORIES[problem_id]
    except KeyError:
        raise UnknownProblem(
            f"unknown problem {problem_id!r}; known: {', '.join(PROBLEM_IDS)}"
        ) from None
    return factory(seed, **params)
