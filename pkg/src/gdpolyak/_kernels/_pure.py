"""Pure-Python/NumPy fallback for the hot evaluation kernels.

Mirrors the compiled extension `_fast` exactly; selected at import time by
`gdpolyak._kernels` when the extension is unavailable or disabled.
"""

from __future__ import annotations

import math

import numpy as np

COMPILED = False

CONVEX_QUARTIC = 0
NONCONVEX_QUARTIC = 1
QUARTIC_ROSENBROCK = 2


def quartic2d_value_grad(kind, a, b):
    """Value and gradient of one of the fixed 2-d benchmark objectives.

    kind 0: 0.5*(v + u^4)^2 + u^4 at (a, b) = (v, u)
    kind 1: 0.5*(v + u^2)^2 + u^4 at (a, b) = (v, u)
    kind 2: (1 - x)^2 + 100*(y - x^2)^4 at (a, b) = (x, y)
    """
    # Powers are written as explicit products so the pure and compiled
    # kernels round identically (libm pow need not match x*x*x*x).
    if kind == CONVEX_QUARTIC:
        v, u = a, b
        u2 = u * u
        u3 = u2 * u
        w = v + u2 * u2
        f = 0.5 * w * w + u2 * u2
        return f, w, 4.0 * u3 * w + 4.0 * u3
    if kind == NONCONVEX_QUARTIC:
        v, u = a, b
        u2 = u * u
        w = v + u2
        f = 0.5 * w * w + u2 * u2
        return f, w, 2.0 * u * w + 4.0 * u2 * u
    if kind == QUARTIC_ROSENBROCK:
        x, y = a, b
        w = y - x * x
        w2 = w * w
        w3 = w2 * w
        t = 1.0 - x
        f = t * t + 100.0 * w2 * w2
        return f, -2.0 * t - 800.0 * x * w3, 400.0 * w3
    raise ValueError(f"unknown 2-d problem kind {kind}")


def sensing_value_grad(A, bvals, X):
    """Loss and gradient of the quadratic measurement model.

    f(X) = (1/(2m)) sum_i (||X^T a_i||^2 - b_i)^2 with a_i the rows of A;
    grad f(X) = (2/m) sum_i (||X^T a_i||^2 - b_i) a_i a_i^T X.
    """
    m = A.shape[0]
    Z = A @ X
    r = np.einsum("ij,ij->i", Z, Z) - bvals
    f = float(r @ r) / (2.0 * m)
    G = (2.0 / m) * (A.T @ (r[:, None] * Z))
    return f, G


def gd_iters_to_distance(kind, a0, b0, cx, cy, eta, thresholds, budget):
    """Fixed-step GD on a 2-d problem; iterations to each distance threshold.

    Distance is Euclidean to the minimizer (cx, cy).  `thresholds` must be
    sorted in decreasing order.  Returns one count per threshold, with -1
    for thresholds not reached within `budget` steps.  This loop dominates
    the runtime of the sublinear-regime scaling experiment, hence the
    compiled twin.
    """
    counts = [-1] * len(thresholds)
    a, b = float(a0), float(b0)
    j = 0
    nthr = len(thresholds)
    for k in range(budget + 1):
        da, db = a - cx, b - cy
        dist = math.sqrt(da * da + db * db)
        while j < nthr and dist <= thresholds[j]:
            counts[j] = k
            j += 1
        if j == nthr:
            break
        _, ga, gb = quartic2d_value_grad(kind, a, b)
        a -= eta * ga
        b -= eta * gb
    return counts
