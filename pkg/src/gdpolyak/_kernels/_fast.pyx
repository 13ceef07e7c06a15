# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled evaluation kernels; pure-Python twin lives in `_pure`."""

import numpy as np

cimport cython
from libc.math cimport sqrt

COMPILED = True

CONVEX_QUARTIC = 0
NONCONVEX_QUARTIC = 1
QUARTIC_ROSENBROCK = 2


# The arithmetic below mirrors the pure twin expression-for-expression so
# both backends produce bit-identical traces.
cdef inline void _vg(int kind, double a, double b, double* out) nogil:
    cdef double w, u2, u3, w2, w3, t
    if kind == 0:
        u2 = b * b
        u3 = u2 * b
        w = a + u2 * u2
        out[0] = 0.5 * w * w + u2 * u2
        out[1] = w
        out[2] = 4.0 * u3 * w + 4.0 * u3
    elif kind == 1:
        u2 = b * b
        w = a + u2
        out[0] = 0.5 * w * w + u2 * u2
        out[1] = w
        out[2] = 2.0 * b * w + 4.0 * u2 * b
    else:
        w = b - a * a
        w2 = w * w
        w3 = w2 * w
        t = 1.0 - a
        out[0] = t * t + 100.0 * w2 * w2
        out[1] = -2.0 * t - 800.0 * a * w3
        out[2] = 400.0 * w3


def quartic2d_value_grad(int kind, double a, double b):
    cdef double out[3]
    if kind < 0 or kind > 2:
        raise ValueError(f"unknown 2-d problem kind {kind}")
    _vg(kind, a, b, out)
    return out[0], out[1], out[2]


def sensing_value_grad(double[:, ::1] A, double[::1] bvals, double[:, ::1] X):
    cdef Py_ssize_t m = A.shape[0]
    cdef Py_ssize_t d = A.shape[1]
    cdef Py_ssize_t k = X.shape[1]
    cdef Py_ssize_t i, j, c
    cdef double f = 0.0
    cdef double r, z, s

    Z_arr = np.empty((m, k))
    G_arr = np.zeros((d, k))
    cdef double[:, ::1] Z = Z_arr
    cdef double[:, ::1] G = G_arr

    with nogil:
        for i in range(m):
            r = -bvals[i]
            for c in range(k):
                z = 0.0
                for j in range(d):
                    z += A[i, j] * X[j, c]
                Z[i, c] = z
                r += z * z
            s = 2.0 * r / m
            for c in range(k):
                z = s * Z[i, c]
                for j in range(d):
                    G[j, c] += A[i, j] * z
            f += r * r
    return f / (2.0 * m), G_arr


def gd_iters_to_distance(int kind, double a0, double b0, double cx, double cy,
                         double eta, thresholds, long budget):
    cdef double[::1] thr = np.ascontiguousarray(thresholds, dtype=float)
    cdef Py_ssize_t nthr = thr.shape[0]
    counts_arr = np.full(nthr, -1, dtype=np.int64)
    cdef long[::1] counts = counts_arr
    cdef double a = a0, b = b0
    cdef double da, db, dist
    cdef double out[3]
    cdef Py_ssize_t j = 0
    cdef long k
    if kind < 0 or kind > 2:
        raise ValueError(f"unknown 2-d problem kind {kind}")
    with nogil:
        for k in range(budget + 1):
            da = a - cx
            db = b - cy
            dist = sqrt(da * da + db * db)
            while j < nthr and dist <= thr[j]:
                counts[j] = k
                j += 1
            if j == nthr:
                break
            _vg(kind, a, b, out)
            a -= eta * out[1]
            b -= eta * out[2]
    return [int(c) for c in counts_arr]
