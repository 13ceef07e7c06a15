"""Experiment wiring: specs, trace persistence, grid search, the
verification suite, and figure-data emission for the plot frontend.

Trace CSVs use the fixed header ``k,f,grad_norm,R,step,dist,G`` with 17
significant digits so 64-bit floats round-trip losslessly.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from gdpolyak import algorithms, analysis, problems
from gdpolyak.core import (
    IterRecord,
    NonFinite,
    Objective,
    RunConfig,
    RunTrace,
    StopRule,
)

TRACE_HEADER = ["k", "f", "grad_norm", "R", "step", "dist", "G"]
ALGORITHM_IDS = ("adaptive", "gd", "polyak", "block", "wrapper")

# Documented default initial points; the sized problems draw a small
# Gaussian (scale 0.1) from a stream derived from the experiment seed.
_X0_PRESETS = {
    "convex_quartic": (0.5, 0.5),
    "nonconvex_quartic": (0.5, 0.5),
    "quartic_rosenbrock": (-0.5, 0.25),
    "quartic_1d": (1.0,),
    "quadratic_1d": (1.0,),
}
_X0_GAUSS_SCALE = 0.1


class UnknownFigure(Exception):
    pass


@dataclass
class ExperimentSpec:
    problem_id: str
    algorithm_id: str = "adaptive"
    problem_params: Dict = field(default_factory=dict)
    eta: float = 1.0
    tau: float = 0.15
    stepsize: Optional[float] = None  # gd / block GD stepsize; defaults to eta
    block_len: int = 1
    h0: float = 0.0
    outer_epochs: int = 25
    x0: object = "default"  # explicit sequence, "default", or "ball:<radius>"
    stop_kind: str = "distance"
    stop_threshold: float = 1e-6
    max_iters: int = 1000
    seed: int = 0
    # The quartic problems have gradient norms below any practical positive
    # threshold at distances well above the stop thresholds, so experiment
    # runs only stop on an exactly zero gradient.
    grad_zero_tol: float = 0.0
    # Figure traces keep the pre-divergence records of a run that leaves the
    # finite range instead of raising; cmd_run keeps the raising behavior.
    truncate_on_divergence: bool = False

    def __post_init__(self):
        if self.algorithm_id not in ALGORITHM_IDS:
            raise ValueError(f"unknown algorithm {self.algorithm_id!r}")

    def config(self) -> RunConfig:
        return RunConfig(
            eta=self.eta,
            tau=self.tau,
            max_iters=self.max_iters,
            stop=StopRule(self.stop_kind, self.stop_threshold),
            grad_zero_tol=self.grad_zero_tol,
        )


@dataclass
class GridSpec:
    """Candidate hyperparameter lists; best = fewest iterations to the stop
    rule, ties broken by smaller final diagnostic, then grid order."""

    etas: Sequence[float] = (1.0,)
    taus: Sequence[float] = (0.15,)
    stepsizes: Sequence[float] = (1.0,)
    block_lens: Sequence[int] = (1,)

    def points(self, algorithm_id: str) -> List[Dict]:
        if algorithm_id == "adaptive":
            keys, lists = ("eta", "tau"), (self.etas, self.taus)
        elif algorithm_id == "block":
            keys, lists = ("stepsize", "block_len"), (self.stepsizes, self.block_lens)
        elif algorithm_id == "gd":
            keys, lists = ("stepsize",), (self.stepsizes,)
        else:
            raise ValueError(f"no grid for algorithm {algorithm_id!r}")
        if any(len(l) == 0 for l in lists):
            raise ValueError("empty candidate list in grid")
        return [dict(zip(keys, combo)) for combo in itertools.product(*lists)]


def resolve_x0(spec: ExperimentSpec, obj: Objective) -> np.ndarray:
    x0 = spec.x0
    if isinstance(x0, str):
        if x0 == "default":
            preset = _X0_PRESETS.get(spec.problem_id)
            if preset is not None:
                return np.asarray(preset, dtype=float)
            rng = np.random.default_rng([spec.seed, 1])
            return _X0_GAUSS_SCALE * rng.standard_normal(obj.dim)
        if x0.startswith("ball:"):
            radius = float(x0.split(":", 1)[1])
            rng = np.random.default_rng([spec.seed, 2])
            v = rng.standard_normal(obj.dim)
            v /= np.linalg.norm(v)
            return radius * rng.random() ** (1.0 / obj.dim) * v
        return np.asarray([float(t) for t in x0.split(",")], dtype=float)
    return np.asarray(x0, dtype=float)


def _concat_epochs(traces: List[RunTrace], cfg: RunConfig, name: str, seed: int) -> RunTrace:
    """Flatten wrapper epochs into one trace with consecutive indices."""
    records = []
    k = 0
    for t in traces:
        for rec in t.records:
            # epoch-terminal records are interior points of the overall run
            kind = rec.step_kind
            if kind == "none" and t is not traces[-1]:
                kind = "gradient" if t.terminated_by == "budget" else kind
            records.append(
                IterRecord(
                    k=k,
                    f_val=rec.f_val,
                    grad_norm=rec.grad_norm,
                    ratio_R=rec.ratio_R,
                    step_kind=kind,
                    distance=rec.distance,
                    proj_grad_sq=rec.proj_grad_sq,
                )
            )
            k += 1
    return RunTrace(
        records=records,
        config=cfg,
        problem_name=name,
        seed=seed,
        terminated_by=traces[-1].terminated_by,
    )


def run_experiment(spec: ExperimentSpec) -> RunTrace:
    obj = problems.make_problem(spec.problem_id, seed=spec.seed, **spec.problem_params)
    cfg = spec.config()
    x0 = resolve_x0(spec, obj)
    stepsize = spec.stepsize if spec.stepsize is not None else spec.eta
    trunc = spec.truncate_on_divergence
    if spec.algorithm_id == "adaptive":
        return algorithms.run_adaptive(
            obj, x0, cfg, seed=spec.seed, truncate_on_divergence=trunc
        )
    if spec.algorithm_id == "gd":
        return algorithms.run_gd(
            obj, x0, stepsize, cfg, seed=spec.seed, truncate_on_divergence=trunc
        )
    if spec.algorithm_id == "polyak":
        return algorithms.run_polyak(
            obj, x0, cfg, seed=spec.seed, truncate_on_divergence=trunc
        )
    if spec.algorithm_id == "block":
        sched = algorithms.BlockSchedule(gd_stepsize=stepsize, block_len=spec.block_len)
        return algorithms.run_block_gdpolyak(
            obj, x0, sched, cfg, seed=spec.seed, truncate_on_divergence=trunc
        )
    traces, _ = algorithms.run_lower_bound_wrapper(
        obj, x0, cfg, h0=spec.h0, outer_epochs=spec.outer_epochs, seed=spec.seed
    )
    return _concat_epochs(traces, cfg, obj.name, spec.seed)


# ---------------------------------------------------------------------------
# Trace persistence
# ---------------------------------------------------------------------------

def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def trace_csv_text(trace: RunTrace) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRACE_HEADER)
    for r in trace.records:
        step = {"gradient": "gd", "polyak": "polyak", "none": ""}[r.step_kind]
        g = "" if r.proj_grad_sq is None else _fmt(r.proj_grad_sq)
        w.writerow(
            [r.k, _fmt(r.f_val), _fmt(r.grad_norm), _fmt(r.ratio_R), step, _fmt(r.distance), g]
        )
    return buf.getvalue()


def write_trace_csv(trace: RunTrace, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w", newline="") as fh:
        fh.write(trace_csv_text(trace))


def summarize(trace: RunTrace, spec: Optional[ExperimentSpec] = None) -> Dict:
    final = trace.final()
    out = {
        "problem": trace.problem_name,
        "iterations": trace.iterations(),
        "terminated_by": trace.terminated_by,
        "final_f": final.f_val,
        "final_grad_norm": final.grad_norm,
        "final_diagnostic": final.distance,
        "seed": trace.seed,
        "config": {
            "eta": trace.config.eta,
            "tau": trace.config.tau,
            "max_iters": trace.config.max_iters,
            "stop_kind": trace.config.stop.kind,
            "stop_threshold": trace.config.stop.threshold,
        },
    }
    if spec is not None:
        out["algorithm"] = spec.algorithm_id
        if spec.stop_kind == "value_gap":
            out["final_diagnostic"] = final.f_val
        elif spec.stop_kind == "gradient_norm":
            out["final_diagnostic"] = final.grad_norm
    return out


def write_summary_json(summary: Dict, path: str) -> None:
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    with open(path, "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")


def cmd_run(spec: ExperimentSpec, out_prefix: str) -> Dict:
    trace = run_experiment(spec)
    write_trace_csv(trace, out_prefix + ".csv")
    summary = summarize(trace, spec)
    write_summary_json(summary, out_prefix + ".json")
    return summary


# ---------------------------------------------------------------------------
# Grid search
# ---------------------------------------------------------------------------

def _grid_one(spec: ExperimentSpec, point: Dict) -> Dict:
    trial = ExperimentSpec(**{**spec.__dict__, **point})
    try:
        trace = run_experiment(trial)
        reached = trace.terminated_by == "stop_rule"
        iters = trace.iterations() if reached else trial.max_iters
        diag = trace.final().distance
        if trial.stop_kind == "value_gap":
            diag = trace.final().f_val
        elif trial.stop_kind == "gradient_norm":
            diag = trace.final().grad_norm
    except NonFinite:
        reached, iters, diag = False, trial.max_iters, float("inf")
    return {**point, "iterations": iters, "final_diagnostic": diag, "reached": reached}


def cmd_grid(spec: ExperimentSpec, grid: GridSpec, out_prefix: Optional[str] = None) -> Tuple[Dict, List[Dict]]:
    """Run every grid point (shared seed and x0) and return (best, table)."""
    pts = grid.points(spec.algorithm_id)
    with ThreadPoolExecutor(max_workers=min(8, len(pts))) as pool:
        rows = list(pool.map(lambda p: _grid_one(spec, p), pts))
    best = min(
        range(len(rows)),
        key=lambda i: (rows[i]["iterations"], rows[i]["final_diagnostic"], i),
    )
    if out_prefix is not None:
        os.makedirs(os.path.dirname(os.path.abspath(out_prefix)) or ".", exist_ok=True)
        keys = [k for k in rows[0] if k not in ("iterations", "final_diagnostic", "reached")]
        with open(out_prefix + "_grid.csv", "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(keys + ["iterations", "final_diagnostic"])
            for r in rows:
                w.writerow([r[k] for k in keys] + [r["iterations"], _fmt(r["final_diagnostic"])])
    return rows[best], rows


# ---------------------------------------------------------------------------
# Verification suite
# ---------------------------------------------------------------------------

_CONVEX_IDS = {"convex_quartic", "quartic_1d", "quadratic_1d"}
# The vanishing-cubics property is only guaranteed for convex objectives, so a
# reported violation on a nonconvex problem is expected rather than an error.
_EXPECTED_CUBIC_FAIL = set(problems.PROBLEM_IDS) - _CONVEX_IDS


def _grad_check_points(obj: Objective, seed: int, n: int = 10):
    rng = np.random.default_rng([seed, 3])
    for _ in range(n):
        v = rng.standard_normal(obj.dim)
        v /= np.linalg.norm(v)
        yield rng.random() * v  # uniform radius in (0, 1)


def verify_problem(problem_id: str, seed: int = 0, problem_params: Optional[Dict] = None) -> Dict:
    """Run the derivative and invariant checks for one problem.

    Returns a JSON-ready report; `ok` is true iff every check that is not
    flagged expected_fail passed.
    """
    obj = problems.make_problem(problem_id, seed=seed, **(problem_params or {}))
    checks: List[Dict] = []

    def add(name, passed, expected_fail=False, **details):
        checks.append(
            {"name": name, "passed": bool(passed), "expected_fail": expected_fail, **details}
        )

    # Gradient vs. central finite differences at seeded points in the unit ball.
    worst = 0.0
    for x in _grad_check_points(obj, seed):
        g = obj.gradient(x)
        gfd = analysis.fd_gradient(obj, x)
        rel = float(np.linalg.norm(gfd - g) / max(np.linalg.norm(g), 1.0))
        worst = max(worst, rel)
    add("gradient_fd", worst <= 1e-6, max_rel_error=worst)

    if obj.minimizer is not None:
        H = analysis.fd_hessian(obj, obj.minimizer)
        if problem_id in ("convex_quartic", "nonconvex_quartic"):
            add(
                "hessian_at_origin",
                np.max(np.abs(H - np.diag([1.0, 0.0]))) <= 1e-6,
                max_abs_error=float(np.max(np.abs(H - np.diag([1.0, 0.0])))),
            )
        try:
            with warnings.catch_warnings():
                # A trivial null space (1-d strongly convex problems) is fine here.
                warnings.simplefilter("ignore", UserWarning)
                split = analysis.eigen_split(H)
        except analysis.AllNull:
            split = None
            add("hessian_nonzero", False)
        if split is not None:
            P, Q = split.P, split.Q
            err = max(
                float(np.max(np.abs(P @ P - P))),
                float(np.max(np.abs(Q @ Q - Q))),
                float(np.max(np.abs(P + Q - np.eye(obj.dim)))),
                float(np.max(np.abs(P @ Q))),
            )
            add("projector_algebra", err <= 1e-10, max_abs_error=err)
            if split.null_dim > 0 and problem_id != "quadratic_1d":
                report = analysis.check_vanishing_cubics(obj, split, seed=seed)
                add(
                    "vanishing_cubics",
                    report.passed,
                    expected_fail=problem_id in _EXPECTED_CUBIC_FAIL,
                    max_abs_cubic_uuu=report.max_abs_cubic_uuu,
                    max_abs_cubic_uuw=report.max_abs_cubic_uuw,
                )

        m0, _ = analysis.growth_estimate(obj, radius=0.5, n_samples=2000, seed=seed)
        add("fourth_order_growth", m0 > 0.0, m0_hat=m0)

    # Monotonicity and contraction audits on the convex 2-d model problem.
    if problem_id == "convex_quartic":
        cfg = RunConfig(eta=1.0, tau=0.15, max_iters=200, stop=StopRule("distance", 1e-6))
        trace = algorithms.run_adaptive(obj, np.array([0.5, 0.5]), cfg, seed=seed)
        norms = [float(np.linalg.norm(x)) for x in trace.iterates]
        mono = all(b <= a * (1 + 1e-12) for a, b in zip(norms, norms[1:]))
        add("distance_monotonicity", mono)

        split = analysis.eigen_split(obj.hessian(obj.minimizer))
        cfg2 = RunConfig(eta=0.1, tau=0.15, max_iters=500, stop=StopRule("distance", 1e-8))
        trace2 = algorithms.run_adaptive(obj, np.array([0.3, 0.3]), cfg2, seed=seed)
        ratios = analysis.contraction_audit(trace2, split=split, obj=obj)
        frac = (
            sum(1 for _, r in ratios if r <= 0.99) / len(ratios) if ratios else 1.0
        )
        add("projected_gradient_contraction", frac >= 0.9, contracting_fraction=frac)

    if problem_id in _CONVEX_IDS:
        cfg = RunConfig(eta=0.1, tau=0.15, max_iters=50, stop=StopRule("distance", 1e-14))
        x0 = resolve_x0(ExperimentSpec(problem_id, seed=seed), obj)
        trace = algorithms.run_gd(obj, x0, 0.1, cfg, seed=seed)
        fs = [r.f_val for r in trace.records]
        add("gd_value_monotonicity", all(b <= a + 1e-12 for a, b in zip(fs, fs[1:])))

    ok = all(c["passed"] or c["expected_fail"] for c in checks)
    return {"problem": problem_id, "seed": seed, "ok": ok, "checks": checks}


def cmd_verify(problem_id: str, seed: int = 0, problem_params: Optional[Dict] = None,
               out: Optional[str] = None) -> Dict:
    report = verify_problem(problem_id, seed=seed, problem_params=problem_params)
    if out is not None:
        write_summary_json(report, out)
    return report


# ---------------------------------------------------------------------------
# Figure data
# ---------------------------------------------------------------------------

def _surface_csv(path: str, value_grad, n: int = 101) -> None:
    grid = np.linspace(-1.0, 1.0, n)
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["v", "u", "f"])
        for u in grid:
            for v in grid:
                w.writerow([_fmt(v), _fmt(u), _fmt(value_grad(np.array([v, u]))[0])])


def _ravine_csv(path: str, problem_id: str, n: int = 201) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["v", "u"])
        for v, u in problems.ravine_curve(problem_id, np.linspace(-1.0, 1.0, n)):
            w.writerow([_fmt(v), _fmt(u)])


# (problem, per-method settings, stop rule, budget) for the benchmark figure
_FIG4_ROWS = [
    ("quartic_rosenbrock", {"adaptive": (0.05, 0.01), "block": (0.03, 50), "gd": 0.03},
     ("distance", 1e-7), 6000),
    ("quadratic_sensing", {"adaptive": (0.075, 0.15), "block": (0.075, 200), "gd": 0.075},
     ("distance", 1e-5), 20000),
    ("single_neuron", {"adaptive": (1.0, 0.0125), "block": (1.0, 10), "gd": 1.5},
     ("value_gap", 1e-12), 2000),
]


def cmd_figure_data(figure_id: str, out_dir: str, seed: int = 0) -> List[str]:
    """Emit the CSV bundle a figure is rendered from; returns written paths."""
    os.makedirs(out_dir, exist_ok=True)
    written: List[str] = []

    def emit_trace(tag, spec):
        trace = run_experiment(spec)
        path = os.path.join(out_dir, f"{figure_id}_{tag}.csv")
        write_trace_csv(trace, path)
        written.append(path)

    if figure_id in ("fig1", "fig2"):
        pid = "convex_quartic" if figure_id == "fig1" else "nonconvex_quartic"
        vg = (
            problems.convex_quartic_value_grad
            if figure_id == "fig1"
            else problems.nonconvex_quartic_value_grad
        )
        surf = os.path.join(out_dir, f"{figure_id}_surface.csv")
        rav = os.path.join(out_dir, f"{figure_id}_ravine.csv")
        _surface_csv(surf, vg)
        _ravine_csv(rav, pid)
        written += [surf, rav]
    elif figure_id == "fig3":
        for pid, tau in (("convex_quartic", 0.15), ("nonconvex_quartic", 0.12)):
            base = dict(
                problem_id=pid,
                x0=(0.5, 0.5),
                stop_kind="distance",
                stop_threshold=1e-6,
                max_iters=300,
                seed=seed,
                truncate_on_divergence=True,
            )
            emit_trace(f"{pid}_adaptive", ExperimentSpec(algorithm_id="adaptive", eta=1.0, tau=tau, **base))
            emit_trace(f"{pid}_block", ExperimentSpec(algorithm_id="block", stepsize=1.0, block_len=1, **base))
            emit_trace(f"{pid}_gd", ExperimentSpec(algorithm_id="gd", stepsize=1.0, **base))
            emit_trace(f"{pid}_polyak", ExperimentSpec(algorithm_id="polyak", **base))
    elif figure_id == "fig4":
        for pid, settings, (stop_kind, stop_thr), budget in _FIG4_ROWS:
            base = dict(
                problem_id=pid,
                stop_kind=stop_kind,
                truncate_on_divergence=True,
                stop_threshold=stop_thr,
                max_iters=budget,
                seed=seed,
            )
            eta, tau = settings["adaptive"]
            emit_trace(f"{pid}_adaptive", ExperimentSpec(algorithm_id="adaptive", eta=eta, tau=tau, **base))
            step, blk = settings["block"]
            emit_trace(f"{pid}_block", ExperimentSpec(algorithm_id="block", stepsize=step, block_len=blk, **base))
            emit_trace(f"{pid}_gd", ExperimentSpec(algorithm_id="gd", stepsize=settings["gd"], **base))
    else:
        raise UnknownFigure(f"unknown figure {figure_id!r}")
    return written
