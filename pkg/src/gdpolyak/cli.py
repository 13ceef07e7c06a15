"""Command-line entry point: run, grid, verify, figure-data.

A plain key=value config file can seed any flag (``--config``); flags given
on the command line win.  ``QD_SEED`` supplies the default seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from typing import List, Optional

from gdpolyak import harness
from gdpolyak.core import NonFinite
from gdpolyak.problems import UnknownProblem


def _float_list(text: str) -> List[float]:
    return [float(t) for t in text.split(",") if t]


def _int_list(text: str) -> List[int]:
    return [int(t) for t in text.split(",") if t]


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", help="registered problem id")
    p.add_argument("--algo", default="adaptive", choices=harness.ALGORITHM_IDS)
    p.add_argument("--eta", type=float, default=1.0, help="gradient stepsize")
    p.add_argument("--tau", type=float, default=0.15, help="trigger threshold")
    p.add_argument("--stepsize", type=float, help="GD/block stepsize (defaults to --eta)")
    p.add_argument("--block-len", type=int, default=1)
    p.add_argument("--h0", type=float, default=0.0, help="wrapper lower bound")
    p.add_argument("--outer-epochs", type=int, default=25)
    p.add_argument("--x0", default="default",
                   help="comma-separated point, 'default', or 'ball:<radius>'")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--stop-kind", default="distance",
                   choices=("distance", "gradient_norm", "value_gap"))
    p.add_argument("--stop-threshold", type=float, default=1e-6)
    p.add_argument("--max-iters", type=int, default=1000)
    p.add_argument("--out", help="output path prefix (run/grid) or file (verify)")
    p.add_argument("--config", help="key=value file; command-line flags win")
    p.add_argument("--problem-param", action="append", default=[],
                   metavar="KEY=VALUE", help="problem constructor parameter")


def _apply_config_file(args: argparse.Namespace, argv: List[str]) -> None:
    if not args.config:
        return
    given = {a.split("=", 1)[0].lstrip("-").replace("-", "_")
             for a in argv if a.startswith("--")}
    with open(args.config) as fh:
        for line in fh:
            line = line.strip()
            if not line or line.startswith("#") or "=" not in line:
                continue
            key, value = (t.strip() for t in line.split("=", 1))
            attr = key.replace("-", "_")
            if attr in given or not hasattr(args, attr):
                continue
            current = getattr(args, attr)
            if isinstance(current, bool):
                value = value.lower() in ("1", "true", "yes")
            elif isinstance(current, int):
                value = int(value)
            elif isinstance(current, float):
                value = float(value)
            setattr(args, attr, value)


def _problem_params(pairs: List[str]) -> dict:
    out = {}
    for pair in pairs:
        key, value = pair.split("=", 1)
        try:
            out[key] = int(value)
        except ValueError:
            out[key] = float(value)
    return out


def _spec_from_args(args: argparse.Namespace) -> harness.ExperimentSpec:
    if not args.problem:
        raise SystemExit("error: --problem is required")
    return harness.ExperimentSpec(
        problem_id=args.problem,
        algorithm_id=args.algo,
        problem_params=_problem_params(args.problem_param),
        eta=args.eta,
        tau=args.tau,
        stepsize=args.stepsize,
        block_len=args.block_len,
        h0=args.h0,
        outer_epochs=args.outer_epochs,
        x0=args.x0,
        stop_kind=args.stop_kind,
        stop_threshold=args.stop_threshold,
        max_iters=args.max_iters,
        seed=args.seed,
    )


def main(argv: Optional[List[str]] = None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = argparse.ArgumentParser(prog="gdpolyak")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one experiment, write trace CSV + summary")
    _add_common(p_run)

    p_grid = sub.add_parser("grid", help="grid-search hyperparameters")
    _add_common(p_grid)
    p_grid.add_argument("--grid-eta", type=_float_list, default=[1.0])
    p_grid.add_argument("--grid-tau", type=_float_list, default=[0.15])
    p_grid.add_argument("--grid-stepsize", type=_float_list, default=[1.0])
    p_grid.add_argument("--grid-block-len", type=_int_list, default=[1])

    p_verify = sub.add_parser("verify", help="derivative and invariant checks")
    _add_common(p_verify)

    p_fig = sub.add_parser("figure-data", help="emit CSV bundle for a figure")
    p_fig.add_argument("--figure", required=True, choices=("fig1", "fig2", "fig3", "fig4"))
    p_fig.add_argument("--out", required=True, help="output directory")
    p_fig.add_argument("--seed", type=int, default=None)

    args = parser.parse_args(argv)
    _apply_config_file(args, argv) if hasattr(args, "config") else None
    if args.seed is None:
        args.seed = int(os.environ.get("QD_SEED", "0"))

    try:
        if args.command == "run":
            spec = _spec_from_args(args)
            out = args.out or f"{args.problem}_{args.algo}"
            summary = harness.cmd_run(spec, out)
            print(json.dumps(summary, indent=2, sort_keys=True))
            return 0
        if args.command == "grid":
            spec = _spec_from_args(args)
            grid = harness.GridSpec(
                etas=args.grid_eta,
                taus=args.grid_tau,
                stepsizes=args.grid_stepsize,
                block_lens=args.grid_block_len,
            )
            best, _ = harness.cmd_grid(spec, grid, out_prefix=args.out)
            print(json.dumps(best, indent=2, sort_keys=True))
            return 0
        if args.command == "verify":
            if not args.problem:
                raise SystemExit("error: --problem is required")
            report = harness.cmd_verify(
                args.problem,
                seed=args.seed,
                problem_params=_problem_params(args.problem_param),
                out=args.out,
            )
            for check in report["checks"]:
                status = "pass" if check["passed"] else (
                    "expected_fail" if check["expected_fail"] else "FAIL"
                )
                print(f"{check['name']}: {status}")
            return 0 if report["ok"] else 1
        # figure-data
        paths = harness.cmd_figure_data(args.figure, args.out, seed=args.seed)
        for p in paths:
            print(p)
        return 0
    except (UnknownProblem, harness.UnknownFigure, NonFinite, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
