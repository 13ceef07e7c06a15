"""Step rules and run drivers.

The adaptive driver runs fixed-step gradient descent and switches to a
Polyak step whenever the trigger ratio R(x) = (f(x) - floor) / ||grad||^(4/3)
reaches the threshold tau.  Baselines: pure GD, pure Polyak, and the
block-scheduled GD/Polyak alternation.  The lower-bound wrapper handles the
case where the optimal value is only known through a lower bound.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional, Tuple

import numpy as np

from gdpolyak.core import (
    DIVERGENCE_CAP,
    IterRecord,
    NegativeGap,
    NonFinite,
    Objective,
    RunConfig,
    RunTrace,
    ZeroGradient,
)


class InvalidLowerBound(Exception):
    """An inner epoch observed a value below the current lower-bound estimate."""


@dataclass(frozen=True)
class BlockSchedule:
    """block_len gradient steps at gd_stepsize, then one Polyak step, repeated."""

    gd_stepsize: float
    block_len: int

    def __post_init__(self):
        if not self.gd_stepsize > 0:
            raise ValueError("gd_stepsize must be positive")
        if self.block_len < 1:
            raise ValueError("block_len must be at least 1")


@dataclass
class LowerBoundState:
    h_hat: float
    epoch: int
    best_value: float


def gd_step(obj: Objective, x: np.ndarray, eta: float) -> np.ndarray:
    if not eta > 0:
        raise ValueError("eta must be positive")
    return x - eta * obj.gradient(x)


def polyak_step(
    obj: Objective,
    x: np.ndarray,
    f_floor: Optional[float] = None,
    scale: float = 1.0,
    grad_zero_tol: float = 1e-14,
) -> np.ndarray:
    """x - scale * ((f(x) - f_floor) / ||g||^2) * g, with g = grad f(x).

    scale=1 is the plain Polyak step; the lower-bound wrapper uses 1/2.
    """
    floor = obj.optimal_value if f_floor is None else f_floor
    f, g = obj.eval_value_grad(x)
    gn2 = float(g @ g)
    if gn2 <= grad_zero_tol ** 2:
        raise ZeroGradient("Polyak step at a numerically critical point")
    return x - scale * ((f - floor) / gn2) * g


def _drive(
    obj: Objective,
    x0,
    cfg: RunConfig,
    choose: Callable[[int, float], str],
    f_floor: float,
    polyak_scale: float = 1.0,
    gd_eta: Optional[float] = None,
    split=None,
    seed: int = 0,
    keep_iterates: bool = True,
    truncate_on_divergence: bool = False,
) -> RunTrace:
    """Shared iteration loop; `choose(step_index, R)` picks the step kind."""
    x = obj.check_point(x0)
    eta = cfg.eta if gd_eta is None else gd_eta
    P = split.P if (split is not None and cfg.record_G) else None

    records: List[IterRecord] = []
    iterates: List[np.ndarray] = []
    terminated = "budget"

    for k in range(cfg.max_iters + 1):
        f, g = obj.eval_value_grad(x)
        if not (np.isfinite(f) and f <= DIVERGENCE_CAP and np.all(np.isfinite(g))):
            # The lower-bound wrapper tolerates a diverging inner epoch: it
            # only consumes the best iterate, so cut the epoch short here.
            if truncate_on_divergence and records:
                terminated = "budget"
                break
            raise NonFinite(
                f"run on {obj.name!r} left the finite range at iteration {k}"
            )
        gn = float(np.linalg.norm(g))
        gap = f - f_floor
        if gap < -1e-12:
            raise NegativeGap(
                f"f(x)={f!r} below the floor {f_floor!r} on {obj.name!r}"
            )
        ratio = gap / gn ** (4.0 / 3.0) if gn > cfg.grad_zero_tol else 0.0
        dist = obj.distance_to_opt(x)
        G = float(np.dot(P @ g, P @ g)) if P is not None else None

        if cfg.stop.kind == "distance":
            diagnostic = dist
        elif cfg.stop.kind == "gradient_norm":
            diagnostic = gn
        else:
            diagnostic = f - obj.optimal_value

        def emit(step_kind):
            records.append(
                IterRecord(
                    k=k,
                    f_val=float(f),
                    grad_norm=gn,
                    ratio_R=float(ratio),
                    step_kind=step_kind,
                    distance=float(dist),
                    proj_grad_sq=G,
                )
            )
            if keep_iterates:
                iterates.append(x.copy())

        if diagnostic <= cfg.stop.threshold:
            emit("none")
            terminated = "stop_rule"
            break
        if gn <= cfg.grad_zero_tol:
            emit("none")
            terminated = "zero_gradient"
            break
        if k == cfg.max_iters:
            emit("none")
            terminated = "budget"
            break

        kind = choose(k, ratio)
        emit(kind)
        if kind == "polyak":
            x = x - polyak_scale * (gap / (gn * gn)) * g
        else:
            x = x - eta * g

    trace = RunTrace(
        records=records,
        config=cfg,
        problem_name=obj.name,
        seed=seed,
        terminated_by=terminated,
    )
    trace.iterates = iterates if keep_iterates else None
    return trace


def run_adaptive(
    obj: Objective,
    x0,
    cfg: RunConfig,
    f_floor: Optional[float] = None,
    polyak_scale: float = 1.0,
    split=None,
    seed: int = 0,
    truncate_on_divergence: bool = False,
) -> RunTrace:
    """Adaptive run: Polyak step whenever R(x) >= tau, gradient step otherwise.

    Ties fire the Polyak step.  R is computed against `f_floor` (the known
    optimal value by default) so the lower-bound wrapper can substitute its
    running estimate in both the trigger and the step.
    """
    floor = obj.optimal_value if f_floor is None else f_floor
    return _drive(
        obj,
        x0,
        cfg,
        lambda k, R: "polyak" if R >= cfg.tau else "gradient",
        f_floor=floor,
        polyak_scale=polyak_scale,
        split=split,
        seed=seed,
        truncate_on_divergence=truncate_on_divergence,
    )


def run_gd(
    obj: Objective,
    x0,
    eta: float,
    cfg: RunConfig,
    split=None,
    seed: int = 0,
    truncate_on_divergence: bool = False,
) -> RunTrace:
    if not eta > 0:
        raise ValueError("eta must be positive")
    return _drive(
        obj,
        x0,
        cfg,
        lambda k, R: "gradient",
        f_floor=obj.optimal_value,
        gd_eta=eta,
        split=split,
        seed=seed,
        truncate_on_divergence=truncate_on_divergence,
    )


def run_polyak(
    obj: Objective,
    x0,
    cfg: RunConfig,
    split=None,
    seed: int = 0,
    truncate_on_divergence: bool = False,
) -> RunTrace:
    return _drive(
        obj,
        x0,
        cfg,
        lambda k, R: "polyak",
        f_floor=obj.optimal_value,
        split=split,
        seed=seed,
        truncate_on_divergence=truncate_on_divergence,
    )


def run_block_gdpolyak(
    obj: Objective,
    x0,
    sched: BlockSchedule,
    cfg: RunConfig,
    split=None,
    seed: int = 0,
    truncate_on_divergence: bool = False,
) -> RunTrace:
    """Baseline: block_len gradient steps, one Polyak step, repeated."""
    period = sched.block_len + 1

    def choose(k, R):
        return "polyak" if (k + 1) % period == 0 else "gradient"

    return _drive(
        obj,
        x0,
        cfg,
        choose,
        f_floor=obj.optimal_value,
        gd_eta=sched.gd_stepsize,
        split=split,
        seed=seed,
        truncate_on_divergence=truncate_on_divergence,
    )


def run_lower_bound_wrapper(
    obj: Objective,
    x0,
    cfg: RunConfig,
    h0: float,
    outer_epochs: int,
    seed: int = 0,
) -> Tuple[List[RunTrace], List[LowerBoundState]]:
    """Outer loop for an unknown optimal value, given a lower bound h0.

    Each epoch runs the adaptive algorithm with the current estimate in
    place of the optimal value and the Polyak stepsize scaled by 1/2, then
    halves the gap: h <- (h + min_k f(x_k)) / 2.  Epochs warm-start from
    the best iterate seen so far, which preserves the distance progress of
    earlier epochs.
    """
    if outer_epochs < 1:
        raise ValueError("outer_epochs must be at least 1")
    h = float(h0)
    x = obj.check_point(x0)
    traces: List[RunTrace] = []
    states: List[LowerBoundState] = []
    for j in range(1, outer_epochs + 1):
        try:
            trace = run_adaptive(
                obj, x, cfg, f_floor=h, polyak_scale=0.5, seed=seed,
                truncate_on_divergence=True,
            )
        except NegativeGap as exc:
            raise InvalidLowerBound(
                f"epoch {j} observed a value below the estimate {h!r}"
            ) from exc
        traces.append(trace)
        values = [r.f_val for r in trace.records]
        best_idx = int(np.argmin(values))
        best_value = values[best_idx]
        if best_value < h - 1e-12:
            raise InvalidLowerBound(
                f"epoch {j} observed f={best_value!r} below the estimate {h!r}"
            )
        x = trace.iterates[best_idx]
        h = 0.5 * (h + best_value)
        states.append(LowerBoundState(h_hat=h, epoch=j, best_value=best_value))
        if trace.terminated_by == "stop_rule":
            break
    return traces, states
