"""Finite-difference derivative checks, Hessian range/null splitting, and
numerical audits of the contraction properties the step rules rely on.

Default finite-difference steps are sized per derivative order (gradient
1e-5, Hessian 1e-4, third form 1e-3) to balance truncation against
rounding error; the test tolerances assume these defaults.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from gdpolyak.core import Objective, RunTrace

FD_GRAD_H = 1e-5
FD_HESS_H = 1e-4
FD_THIRD_H = 1e-3


class AllNull(Exception):
    """Every eigenvalue fell below the null threshold; the Hessian must be nonzero."""


class EmptyNullSpace(Exception):
    pass


class MissingG(Exception):
    pass


class NegativeValue(Exception):
    pass


@dataclass(frozen=True)
class HessianSplit:
    """Eigendecomposition of a Hessian with projectors onto range and null space.

    P projects onto the eigenspaces with eigenvalue above null_tol, Q onto
    the rest; mu is the smallest retained eigenvalue.
    """

    H: np.ndarray
    eigvals: np.ndarray  # nonincreasing
    null_tol: float
    P: np.ndarray
    Q: np.ndarray
    mu: float

    @property
    def null_dim(self) -> int:
        return int(np.sum(self.eigvals <= self.null_tol))


@dataclass(frozen=True)
class CubicCheckReport:
    base_point: np.ndarray
    max_abs_cubic_uuu: float
    max_abs_cubic_uuw: float
    fd_step: float
    tol: float
    passed: bool


def fd_gradient(obj: Objective, x, h: float = FD_GRAD_H) -> np.ndarray:
    """Central-difference gradient, one coordinate at a time."""
    x = np.asarray(x, dtype=float)
    g = np.empty_like(x)
    e = np.zeros_like(x)
    for i in range(x.size):
        e[i] = h
        g[i] = (obj.value(x + e) - obj.value(x - e)) / (2.0 * h)
        e[i] = 0.0
    return g


def fd_hessian(obj: Objective, x, h: float = FD_HESS_H) -> np.ndarray:
    """Second-order central-difference Hessian, symmetrized."""
    x = np.asarray(x, dtype=float)
    n = x.size
    H = np.empty((n, n))
    f0 = obj.value(x)
    ei = np.zeros(n)
    ej = np.zeros(n)
    for i in range(n):
        ei[i] = h
        H[i, i] = (obj.value(x + ei) - 2.0 * f0 + obj.value(x - ei)) / (h * h)
        for j in range(i + 1, n):
            ej[j] = h
            H[i, j] = (
                obj.value(x + ei + ej)
                - obj.value(x + ei - ej)
                - obj.value(x - ei + ej)
                + obj.value(x - ei - ej)
            ) / (4.0 * h * h)
            H[j, i] = H[i, j]
            ej[j] = 0.0
        ei[i] = 0.0
    return 0.5 * (H + H.T)


def eigen_split(H: np.ndarray, null_tol: Optional[float] = None) -> HessianSplit:
    """Split a symmetric PSD matrix into range and null-space projectors.

    null_tol defaults to 1e-6 times the largest eigenvalue (problem scales
    vary, so an absolute default would misclassify).  Raises AllNull when
    no eigenvalue survives; warns (but proceeds) when none is below the
    threshold, since the intended regime has a nontrivial null space.
    """
    H = np.asarray(H, dtype=float)
    H = 0.5 * (H + H.T)
    vals, vecs = np.linalg.eigh(H)  # ascending
    lam_max = float(vals[-1])
    if null_tol is None:
        null_tol = 1e-6 * max(lam_max, 0.0)
    kept = vals > null_tol
    if not np.any(kept):
        raise AllNull(
            f"all eigenvalues at or below null_tol={null_tol:g}; Hessian is "
            "numerically zero"
        )
    if np.all(kept):
        warnings.warn(
            "eigen_split: no eigenvalue below null_tol; null space is trivial",
            stacklevel=2,
        )
    V = vecs[:, kept]
    P = V @ V.T
    Q = np.eye(H.shape[0]) - P
    return HessianSplit(
        H=H,
        eigvals=vals[::-1].copy(),
        null_tol=float(null_tol),
        P=P,
        Q=Q,
        mu=float(vals[kept][0]),
    )


def _hessian_at(obj: Objective, x) -> np.ndarray:
    if obj.hessian is not None:
        return obj.hessian(x)
    return fd_hessian(obj, x)


def third_form(obj: Objective, x, a, b, c, h: float = FD_THIRD_H) -> float:
    """Trilinear form D^3 f(x)[a, b, c] by differencing the Hessian form along c.

    Differencing a^T H(x + t c) b at t = +-h is one derivative order lower
    in noise than triple-differencing values.
    """
    x = np.asarray(x, dtype=float)
    c = np.asarray(c, dtype=float)
    gp = float(a @ _hessian_at(obj, x + h * c) @ b)
    gm = float(a @ _hessian_at(obj, x - h * c) @ b)
    return (gp - gm) / (2.0 * h)


def check_vanishing_cubics(
    obj: Objective,
    split: HessianSplit,
    n_samples: int = 50,
    h: float = FD_THIRD_H,
    tol: float = 1e-4,
    x: Optional[np.ndarray] = None,
    seed: int = 0,
) -> CubicCheckReport:
    """Probe the third derivative at the base point along null directions.

    Samples u on the unit sphere of the null space and arbitrary unit w,
    reporting the largest |D^3 f[u,u,u]| and |D^3 f[w,u,u]|.  For convex
    objectives both vanish; a nonzero [w,u,u] coupling is the fingerprint
    of a curved ravine that the fixed splitting cannot follow.
    """
    if x is None:
        if obj.minimizer is None:
            raise ValueError("no base point: pass x or ship a minimizer")
        x = obj.minimizer
    if split.null_dim == 0:
        raise EmptyNullSpace("the Hessian split has a trivial null space")
    rng = np.random.default_rng(seed)
    d = split.Q.shape[0]
    max_uuu = 0.0
    max_uuw = 0.0

    def pairs():
        # Deterministic probes first: null directions from the projector's
        # column space against every standard basis vector, so exact
        # couplings (e.g. along coordinate axes) are reported at full size.
        # The sweep is quadratic in d, so it is reserved for small problems.
        for i in range(d if d <= 8 else 0):
            u = split.Q[:, i]
            nu = np.linalg.norm(u)
            if nu < 1e-12:
                continue
            u = u / nu
            for j in range(d):
                w = np.zeros(d)
                w[j] = 1.0
                yield u, w
        for _ in range(n_samples):
            u = split.Q @ rng.standard_normal(d)
            nu = np.linalg.norm(u)
            if nu < 1e-12:
                continue
            w = rng.standard_normal(d)
            yield u / nu, w / np.linalg.norm(w)

    for u, w in pairs():
        max_uuu = max(max_uuu, abs(third_form(obj, x, u, u, u, h)))
        max_uuw = max(max_uuw, abs(third_form(obj, x, w, u, u, h)))
    return CubicCheckReport(
        base_point=np.asarray(x, dtype=float),
        max_abs_cubic_uuu=max_uuu,
        max_abs_cubic_uuw=max_uuw,
        fd_step=h,
        tol=tol,
        passed=(max_uuu <= tol and max_uuw <= tol),
    )


def proj_grad_sq(obj: Objective, split: HessianSplit, x) -> float:
    """Squared norm of the range-projected gradient."""
    g = obj.gradient(np.asarray(x, dtype=float))
    Pg = split.P @ g
    return float(Pg @ Pg)


def contraction_audit(
    trace: RunTrace,
    split: Optional[HessianSplit] = None,
    obj: Optional[Objective] = None,
) -> List[Tuple[int, float]]:
    """Per-gradient-step ratios G(x_{k+1}) / G(x_k).

    Uses the projected-gradient values recorded in the trace when present;
    otherwise recomputes them from kept iterates, which requires `split`
    and `obj`.  Steps with G(x_k) = 0 are skipped (already on target).
    """
    n = len(trace.records)
    if n >= 1 and trace.records[0].proj_grad_sq is not None:
        G = [r.proj_grad_sq for r in trace.records]
    elif trace.iterates is not None and split is not None and obj is not None:
        G = [proj_grad_sq(obj, split, x) for x in trace.iterates]
    else:
        raise MissingG(
            "trace has neither recorded projected gradients nor iterates "
            "with a split to recompute them"
        )
    out: List[Tuple[int, float]] = []
    for k in range(n - 1):
        rec = trace.records[k]
        if rec.step_kind != "gradient" or G[k] == 0.0:
            continue
        out.append((rec.k, G[k + 1] / G[k]))
    return out


def growth_estimate(
    obj: Objective,
    radius: float,
    n_samples: int,
    seed: int = 0,
    n_radii: int = 20,
) -> Tuple[float, np.ndarray]:
    """Empirical fourth-order growth constant near the minimizer.

    Samples random directions at log-spaced radii up to `radius` and
    returns the smallest observed (f(x) - f*) / dist(x)^4 together with
    the minimizing sample.
    """
    if not radius > 0:
        raise ValueError("radius must be positive")
    if obj.minimizer is None:
        raise ValueError("growth_estimate needs a problem with a known minimizer")
    rng = np.random.default_rng(seed)
    radii = np.geomspace(1e-3 * radius, radius, n_radii)
    m0 = np.inf
    worst = obj.minimizer.copy()
    n_dirs = max(n_samples // n_radii, 1)
    for _ in range(n_dirs):
        direction = rng.standard_normal(obj.dim)
        direction /= np.linalg.norm(direction)
        for r in radii:
            x = obj.minimizer + r * direction
            gap = obj.value(x) - obj.optimal_value
            if gap < -1e-12:
                raise NegativeValue(f"f below the optimal value at {x!r}")
            dist = obj.distance_to_opt(x)
            if dist <= 0.0:
                continue
            ratio = gap / dist ** 4
            if ratio < m0:
                m0 = ratio
                worst = x
    return float(m0), worst
