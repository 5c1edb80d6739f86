"""Command line: ``entevidence run|demo|list``.

Exit codes: 0 success, 2 parse or validation error, 3 infeasible
constraints, 4 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import replace
from pathlib import Path

from . import __version__
from .errors import ConvergenceError, InfeasibleConstraintsError, ScenarioParseError, ValidationError
from .scenarios import builtin, list_builtins, load_scenario, run_scenario

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_INFEASIBLE = 3
EXIT_NONCONVERGENCE = 4


def _add_run_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=int, help="master seed for sampling and optimizer restarts")
    p.add_argument("--shots", type=int, help="shots per simulation / tomography setting")
    p.add_argument("--restarts", type=int, help="optimizer restarts (default 16)")
    p.add_argument("--stages", type=int, help="penalty stages (default 6)")
    p.add_argument("--penalty-max", type=float, help="final penalty weight (default 1e6)")
    p.add_argument("--step-floor", type=float, help="polish step floor (default 1e-7)")
    p.add_argument("--workers", type=int, help="threads for optimizer restarts (default 1)")
    p.add_argument("--report", choices=("text", "json"), default="text")
    p.add_argument("--out", type=Path, help="write the report here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="entevidence", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run a scenario file")
    run.add_argument("file", type=Path)
    _add_run_flags(run)
    demo = sub.add_parser("demo", help="run a built-in scenario")
    demo.add_argument("name")
    _add_run_flags(demo)
    sub.add_parser("list", help="list built-in scenarios")
    return parser


def _check_positive(name, value):
    if value is not None and value < 1:
        raise ValidationError(f"--{name} must be at least 1, got {value}")


def _configure(scenario, args):
    for name in ("shots", "restarts", "stages", "workers"):
        _check_positive(name, getattr(args, name))
    if args.seed is not None and args.seed < 0:
        raise ValidationError("--seed must be non-negative")
    scenario = scenario.with_overrides(seed=args.seed, shots=args.shots, restarts=args.restarts)
    extra = {k: v for k, v in (("stages", args.stages), ("penalty_max", args.penalty_max),
                               ("step_floor", args.step_floor), ("workers", args.workers)) if v is not None}
    if extra:
        scenario = replace(scenario, optimizer=replace(scenario.optimizer, **extra))
    return scenario


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "list":
        for name, description in list_builtins():
            print(f"{name:16} {description}")
        return EXIT_OK
    try:
        scenario = load_scenario(args.file) if args.command == "run" else builtin(args.name)
        report = run_scenario(_configure(scenario, args)).stamp()
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (ScenarioParseError, ValidationError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except InfeasibleConstraintsError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except ConvergenceError as exc:
        print(f"did not converge: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    text = report.to_json() + "\n" if args.report == "json" else report.to_text()
    if args.out:
        args.out.write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK
