"""Command-line entry point.

Exit codes: 0 success with every check passing, 1 a check failed,
2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .adversaries import SCENARIOS, make_adversary, play_game, scenario_instance
from .errors import OmatchError
from .harness import ExperimentConfig, policy_family, stress_upper_bound, verify_bounds
from .io import dump_instance, dumps, load_problem
from .metric import validate, validate_requests
from .offline import optimal_assignment
from .online import get_algorithm
from .reductions import make_anti_opt, make_one_sided_priority


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _emit(text: str, out: str | None) -> None:
    if out:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            raise UsageError(f"cannot write {out}: {exc.strerror}") from None
    else:
        sys.stdout.write(text)


def _load(args):
    inst, seq = load_problem(_read(args.instance), _read(args.requests))
    problems = validate(inst).violations + validate_requests(inst, seq)
    if problems:
        raise UsageError("invalid input: " + "; ".join(problems))
    return inst, seq


def cmd_solve(args) -> int:
    inst, seq = _load(args)
    plan = optimal_assignment(inst, seq)
    out = plan.to_dict()
    if inst.scale != 1.0:
        out["scale"] = inst.scale
    _emit(dumps(out), args.out)
    return 0


def cmd_reduce(args) -> int:
    inst, seq = _load(args)
    if args.mode == "anti-opt":
        red = make_anti_opt(inst, seq)
    else:
        red = make_one_sided_priority(inst, seq)
    _emit(dumps(red.to_dict()), args.out)
    return 0


def cmd_play(args) -> int:
    inst = scenario_instance(args.scenario, args.capacity)
    report = play_game(inst, get_algorithm(args.alg), make_adversary(args.scenario, inst))
    out = report.to_dict()
    out["instance"] = dump_instance(inst)
    _emit(dumps(out), args.out)
    return 0


def cmd_verify(args) -> int:
    if args.all_policies:
        algs = policy_family(args.scenario)
    else:
        algs = args.alg or ["greedy"]
    report = verify_bounds(args.scenario, algs, args.capacity)
    _emit(report.to_csv() if args.format == "csv" else dumps(report.to_dict()), args.out)
    return 0 if report.passed else 1


def cmd_stress(args) -> int:
    cfg = ExperimentConfig(seed=args.seed, trials=args.trials, n_max=args.n_max, plant=not args.no_plant)
    report = stress_upper_bound(cfg)
    _emit(report.to_csv() if args.format == "csv" else dumps(report.to_dict()), args.out)
    return 1 if report.violations else 0


def _positive(text: str) -> int:
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="omatch", description="Online metric matching with capacitated servers.")
    sub = p.add_subparsers(dest="command", required=True)

    def io_args(sp, inputs=True):
        if inputs:
            sp.add_argument("--instance", required=True, help="instance JSON file ('-' for stdin)")
            sp.add_argument("--requests", required=True, help="request sequence JSON file")
        sp.add_argument("--out", help="write the report here instead of stdout")

    sp = sub.add_parser("solve", help="offline optimum for an instance and request sequence")
    io_args(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("reduce", help="anti-opt / one-sided-priority rewrite of a two-server input")
    sp.add_argument("--mode", choices=["anti-opt", "one-sided"], required=True)
    io_args(sp)
    sp.set_defaults(func=cmd_reduce)

    sp = sub.add_parser("play", help="run one algorithm against a lower-bound adversary")
    sp.add_argument("--scenario", choices=SCENARIOS, required=True)
    sp.add_argument("--alg", default="greedy", help="greedy, left, right, farthest or policy:<L|R...>")
    sp.add_argument("--capacity", type=_positive, default=1)
    io_args(sp, inputs=False)
    sp.set_defaults(func=cmd_play)

    sp = sub.add_parser("verify-bounds", help="check adversary lower bounds and branch closed forms")
    sp.add_argument("--scenario", choices=SCENARIOS, required=True)
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--alg", action="append", help="algorithm name (repeatable)")
    group.add_argument("--all-policies", action="store_true", help="every side-choice policy plus greedy/left/right")
    sp.add_argument("--capacity", type=_positive, default=1)
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    io_args(sp, inputs=False)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("stress", help="randomized check of GREEDY <= 3 OPT on two servers")
    sp.add_argument("--trials", type=_positive, default=10_000)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--n-max", type=_positive, default=12)
    sp.add_argument("--no-plant", action="store_true", help="skip the planted adversarial trial")
    sp.add_argument("--format", choices=["json", "csv"], default="json")
    io_args(sp, inputs=False)
    sp.set_defaults(func=cmd_stress)
    return p


def run_cli(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (UsageError, OmatchError) as exc:
        print(f"omatch {args.command}: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_cli())
