"""Adaptive GD-Polyak optimization library and benchmark harness."""

from gdpolyak.core import (
    IterRecord,
    Objective,
    RunConfig,
    RunTrace,
    StopRule,
    euclid_distance,
    ratio_R,
)
from gdpolyak.algorithms import (
    BlockSchedule,
    gd_step,
    polyak_step,
    run_adaptive,
    run_block_gdpolyak,
    run_gd,
    run_lower_bound_wrapper,
    run_polyak,
)
from gdpolyak.problems import make_problem

__version__ = "0.1.0"

__all__ = [
    "BlockSchedule",
    "IterRecord",
    "Objective",
    "RunConfig",
    "RunTrace",
    "StopRule",
    "euclid_distance",
    "gd_step",
    "make_problem",
    "polyak_step",
    "ratio_R",
    "run_adaptive",
    "run_block_gdpolyak",
    "run_gd",
    "run_lower_bound_wrapper",
    "run_polyak",
]
