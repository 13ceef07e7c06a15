"""Compare the compiled evaluation kernels against the pure-Python fallback.

The scaling experiment drives fixed-step GD on a 2-d quartic for hundreds of
millions of iterations (the sublinear regime needs ~2.5e8 steps to separate
the 1e-4 and 1e-8 thresholds), which is the reason the hot kernels have a
compiled twin.  Run:

    python3 benchmarks/bench_kernels.py

Set GDPOLYAK_PURE=1 to check which backend the package itself selected.
"""

import importlib
import time

import numpy as np

from gdpolyak._kernels import _pure

try:
    from gdpolyak._kernels import _fast
except ImportError:
    _fast = None


def _time(fn, *args, repeat=3):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def bench_gd_loop(backend, budget):
    return _time(
        backend.gd_iters_to_distance,
        backend.CONVEX_QUARTIC, 0.5, 0.5, 0.0, 0.0, 0.5, [1e-12], budget,
        repeat=1,
    )


def bench_sensing(backend, m=200, d=10, k=3, iters=200):
    rng = np.random.default_rng(0)
    A = rng.standard_normal((m, d))
    b = rng.random(m)
    X = 0.1 * rng.standard_normal((d, k))

    def loop():
        Y = X.copy()
        for _ in range(iters):
            _, G = backend.sensing_value_grad(A, b, Y)
            Y -= 0.05 * G
        return Y

    return _time(loop)


def main():
    budget = 2_000_000
    print(f"GD loop on the convex quartic, budget {budget:,} iterations:")
    t_pure, counts = bench_gd_loop(_pure, budget)
    print(f"  pure:     {t_pure:8.3f} s   ({budget / t_pure:,.0f} iters/s)  counts={counts}")
    if _fast is not None:
        t_fast, counts_f = bench_gd_loop(_fast, budget)
        assert counts == counts_f, "backends disagree on iteration counts"
        print(f"  compiled: {t_fast:8.3f} s   ({budget / t_fast:,.0f} iters/s)")
        print(f"  speedup:  {t_pure / t_fast:.1f}x")
        full = 2.5e8
        print(f"  projected time for the 2.5e8-step scaling run: "
              f"pure {full * t_pure / budget / 60:.1f} min, "
              f"compiled {full * t_fast / budget:.1f} s")
    else:
        print("  compiled backend unavailable")

    print("Quadratic-sensing gradient loop (m=200, d=10, k=3, 200 steps):")
    t_pure, Yp = bench_sensing(_pure)
    print(f"  pure:     {t_pure * 1e3:8.2f} ms")
    if _fast is not None:
        t_fast, Yf = bench_sensing(_fast)
        # BLAS and the explicit loop sum in different orders, so agreement
        # here is to rounding, unlike the bit-identical 2-d kernels.
        assert np.allclose(Yp, Yf, rtol=1e-10), "backends disagree on sensing iterates"
        print(f"  compiled: {t_fast * 1e3:8.2f} ms")
        print(f"  speedup:  {t_pure / t_fast:.1f}x")


if __name__ == "__main__":
    main()
