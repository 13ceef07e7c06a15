"""Shared data types: objectives, run configuration, iteration traces."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, List, Optional

import numpy as np

GRAD_ZERO_TOL = 1e-14
DIVERGENCE_CAP = 1e12

STOP_KINDS = ("distance", "gradient_norm", "value_gap")
STEP_KINDS = ("gradient", "polyak", "none")
TERMINATIONS = ("stop_rule", "budget", "zero_gradient")


class ZeroGradient(Exception):
    """Gradient norm at or below the numerical zero threshold."""


class NegativeGap(Exception):
    """f(x) fell below the declared optimal value; broken problem definition."""


class DimensionMismatch(Exception):
    pass


class NonFinite(Exception):
    """An iterate or function value left the finite range."""


@dataclass(frozen=True)
class Objective:
    """A smooth objective with analytic gradient and known optimal value.

    `distance` is the problem-specific stop diagnostic; it defaults to the
    Euclidean distance to `minimizer` when one is provided.  `value_grad`
    may be supplied to share work between the value and gradient (used by
    the measurement-based problems); otherwise the two callables are
    composed.  `hessian`, when present, is the analytic Hessian used by the
    derivative-verification code in place of finite differences.
    """

    name: str
    dim: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    optimal_value: float = 0.0
    minimizer: Optional[np.ndarray] = None
    distance: Optional[Callable[[np.ndarray], float]] = None
    hessian: Optional[Callable[[np.ndarray], np.ndarray]] = None
    value_grad: Optional[Callable[[np.ndarray], tuple]] = None

    def eval_value_grad(self, x: np.ndarray):
        if self.value_grad is not None:
            return self.value_grad(x)
        return self.value(x), self.gradient(x)

    def distance_to_opt(self, x: np.ndarray) -> float:
        if self.distance is not None:
            return self.distance(x)
        if self.minimizer is None:
            raise ValueError(
                f"objective {self.name!r} has neither a distance diagnostic "
                "nor a minimizer"
            )
        return euclid_distance(x, self.minimizer)

    def check_point(self, x: np.ndarray) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if x.shape != (self.dim,):
            raise DimensionMismatch(
                f"point of shape {x.shape} for objective of dimension {self.dim}"
            )
        if not np.all(np.isfinite(x)):
            raise NonFinite(f"non-finite entries in point for {self.name!r}")
        return x


@dataclass(frozen=True)
class StopRule:
    """Stopping diagnostic: stop once `kind` falls below `threshold`."""

    kind: str
    threshold: float

    def __post_init__(self):
        if self.kind not in STOP_KINDS:
            raise ValueError(f"unknown stop kind {self.kind!r}")
        if not self.threshold > 0:
            raise ValueError("stop threshold must be positive")


@dataclass(frozen=True)
class RunConfig:
    eta: float
    tau: float
    max_iters: int
    stop: StopRule
    grad_zero_tol: float = GRAD_ZERO_TOL
    record_G: bool = False

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError("eta must be positive")
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be at least 1")
        if self.grad_zero_tol < 0:
            raise ValueError("grad_zero_tol must be nonnegative")


@dataclass(frozen=True)
class IterRecord:
    k: int
    f_val: float
    grad_norm: float
    ratio_R: float
    step_kind: str
    distance: float
    proj_grad_sq: Optional[float] = None


@dataclass
class RunTrace:
    records: List[IterRecord]
    config: RunConfig
    problem_name: str
    seed: int
    terminated_by: str
    iterates: Optional[list] = None  # x_k per record, when the driver keeps them

    def __len__(self):
        return len(self.records)

    def iterations(self) -> int:
        """Number of steps actually taken (records minus the terminal point)."""
        return max(len(self.records) - 1, 0)

    def step_kinds(self) -> List[str]:
        return [r.step_kind for r in self.records if r.step_kind != "none"]

    def final(self) -> IterRecord:
        return self.records[-1]


def euclid_distance(x: np.ndarray, y: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"shapes {x.shape} and {y.shape}")
    return float(np.linalg.norm(x - y))


def ratio_R(
    obj: Objective,
    x: np.ndarray,
    f_floor: Optional[float] = None,
    grad_zero_tol: float = GRAD_ZERO_TOL,
) -> float:
    """Trigger ratio (f(x) - floor) / ||grad f(x)||^(4/3).

    On a pure quartic the ratio is constant in x; near a minimizer with
    positive curvature it vanishes, which makes it a regime detector for
    the adaptive step rule.
    """
    floor = obj.optimal_value if f_floor is None else f_floor
    f, g = obj.eval_value_grad(x)
    gap = f - floor
    gn = float(np.linalg.norm(g))
    if gn <= grad_zero_tol:
        raise ZeroGradient(f"gradient norm {gn:g} at or below {grad_zero_tol:g}")
    if gap < -1e-12:
        raise NegativeGap(
            f"f(x)={f!r} is below the floor {floor!r} for {obj.name!r}"
        )
    return gap / gn ** (4.0 / 3.0)
