"""Command-line surface: iterate, solve, eval, verify, asymptotics.

All output is JSON on stdout with sorted keys, so identical configurations
produce byte-identical results (sign and branch conventions are recorded in
the solution itself).  Exit codes: 0 success, 1 input error, 2 degenerate or
singular problem, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

import mpmath as mp

from .errors import SomosError, DegenerateCurve, SingularMu, ZeroSeed
from .exact import (
    SequenceWindow,
    Somos4Params,
    Somos5Params,
    as_rational,
    iterate_eds,
    iterate_somos4,
    iterate_somos5,
)
from .solver import eval_tau, growth_constant, solve_somos4, solve_somos5
from .verify import SUITE_NAMES, run_suites
from .weierstrass import DEFAULT_DPS, to_mp

MIN_DPS = 15


def _parse_rational_list(text: str) -> list[Fraction]:
    return [as_rational(part.strip()) for part in text.split(",") if part.strip()]


def _parse_range(text: str) -> tuple[int, int]:
    lo, _, hi = text.partition(":")
    return int(lo), int(hi)


def _emit(obj) -> None:
    json.dump(obj, sys.stdout, indent=2, sort_keys=True)
    sys.stdout.write("\n")


def _params_for(recurrence: str, values):
    if recurrence == "somos4":
        return Somos4Params(*values)
    if recurrence == "somos5":
        return Somos5Params(*values)
    raise ValueError(f"recurrence {recurrence!r} takes no solver parameters")


def _apply_config(args: argparse.Namespace) -> argparse.Namespace:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
        for key, value in cfg.items():
            attr = key.replace("-", "_")
            if getattr(args, attr, None) in (None, False):
                setattr(args, attr, value)
    return args


def _check_precision(dps: int) -> int:
    dps = int(dps)
    if dps < MIN_DPS:
        raise ValueError(f"precision must be at least {MIN_DPS} digits")
    return dps


def _cmd_iterate(args) -> int:
    seeds = _parse_rational_list(args.seeds)
    n_lo, n_hi = _parse_range(args.range)
    if args.recurrence == "eds":
        if len(seeds) != 4:
            raise ValueError("eds needs four seeds a1,a2,a3,a4")
        window = iterate_eds(*seeds, n_hi=max(abs(n_lo), n_hi, 5))
    else:
        params = _params_for(args.recurrence, _parse_rational_list(args.params))
        seeds_w = SequenceWindow(args.base_index, tuple(seeds))
        if args.recurrence == "somos4":
            window = iterate_somos4(params, seeds_w, n_lo, n_hi)
        else:
            window = iterate_somos5(params, seeds_w, n_lo, n_hi)
    _emit(window.to_json())
    return 0


def _solve_from_args(args):
    params = _parse_rational_list(args.params)
    seeds = _parse_rational_list(args.seeds)
    dps = _check_precision(args.precision)
    if args.recurrence == "somos4":
        return solve_somos4(Somos4Params(*params), seeds, dps)
    if args.recurrence == "somos5":
        return solve_somos5(Somos5Params(*params), seeds, dps)
    raise ValueError("solve supports somos4 and somos5 only")


def _cmd_solve(args) -> int:
    _emit(_solve_from_args(args).to_json())
    return 0


def _cmd_eval(args) -> int:
    if args.solution:
        with open(args.solution, "r", encoding="utf-8") as fh:
            blob = json.load(fh)
        args.recurrence = blob["kind"]
        args.params = ",".join(blob["params"][k] for k in sorted(blob["params"]))
        args.seeds = ",".join(blob["seeds"])
        args.precision = blob["precision"]
    sol = _solve_from_args(args)
    if args.n is not None:
        indices = [args.n]
    else:
        lo, hi = _parse_range(args.range)
        indices = list(range(lo, hi + 1))
    results = []
    with mp.workdps(sol.dps):
        for n in indices:
            ev = eval_tau(sol, n)
            entry = {"n": n, "log_abs": mp.nstr(ev.log_abs, sol.dps)}
            if ev.value is not None:
                entry["value"] = mp.nstr(ev.value, sol.dps)
            results.append(entry)
    _emit({"results": results})
    return 0


def _cmd_verify(args) -> int:
    names = SUITE_NAMES if args.suite == "all" else tuple(s.strip() for s in args.suite.split(","))
    for name in names:
        if name not in SUITE_NAMES:
            raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITE_NAMES)}")
    params = _params_for(args.recurrence, _parse_rational_list(args.params))
    seeds = _parse_rational_list(args.seeds)
    report = run_suites(names, args.recurrence, params, seeds, _check_precision(args.precision))
    _emit(report)
    return 0 if report["pass"] else 3


def _cmd_asymptotics(args) -> int:
    if args.recurrence != "somos5":
        raise ValueError("asymptotics applies to somos5 problems")
    sol = _solve_from_args(args)
    n = args.empirical_n
    params = Somos5Params(*_parse_rational_list(args.params))
    window = iterate_somos5(params, SequenceWindow(0, tuple(_parse_rational_list(args.seeds))),
                            0, n)
    with mp.workdps(sol.dps):
        C = growth_constant(sol)
        emp = mp.log(abs(to_mp(window.value(n), sol.dps))) / n**2
        _emit({
            "C": mp.nstr(C, sol.dps),
            "empirical_estimate": mp.nstr(emp, sol.dps),
            "empirical_n": n,
            "difference": mp.nstr(emp - C, sol.dps),
        })
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="somos",
        description="Exact iteration and sigma-function solution of Somos 4/5 recurrences",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, params=True):
        p.add_argument("--recurrence", choices=("somos4", "somos5", "eds"), default=None)
        if params:
            p.add_argument("--params", default=None, help="comma-separated rationals")
        p.add_argument("--seeds", default=None, help="comma-separated rationals")
        p.add_argument("--precision", type=int, default=DEFAULT_DPS,
                       help=f"working precision in decimal digits (>= {MIN_DPS})")
        p.add_argument("--config", default=None, help="JSON file supplying unset flags")

    p_iter = sub.add_parser("iterate", help="extend a recurrence window exactly")
    common(p_iter)
    p_iter.add_argument("--range", default=None, help="n_lo:n_hi")
    p_iter.add_argument("--base-index", type=int, default=0, dest="base_index")
    p_iter.set_defaults(func=_cmd_iterate)

    p_solve = sub.add_parser("solve", help="solve the IVP and print the solution JSON")
    common(p_solve)
    p_solve.set_defaults(func=_cmd_solve)

    p_eval = sub.add_parser("eval", help="evaluate closed-form terms")
    common(p_eval)
    p_eval.add_argument("--n", type=int, default=None)
    p_eval.add_argument("--range", default=None, help="n_lo:n_hi")
    p_eval.add_argument("--solution", default=None, help="solution JSON from `solve`")
    p_eval.set_defaults(func=_cmd_eval)

    p_verify = sub.add_parser("verify", help="run verification suites")
    common(p_verify)
    p_verify.add_argument("--suite", default="all",
                          help="comma-separated suite names or 'all'")
    p_verify.set_defaults(func=_cmd_verify)

    p_asym = sub.add_parser("asymptotics", help="growth constant and empirical estimate")
    common(p_asym)
    p_asym.add_argument("--empirical-n", type=int, default=30, dest="empirical_n")
    p_asym.set_defaults(func=_cmd_asymptotics)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        args = _apply_config(args)
        for required in ("recurrence",):
            if getattr(args, required, None) is None:
                raise ValueError(f"--{required} is required (flag or config)")
        return args.func(args)
    except (DegenerateCurve, SingularMu, ZeroSeed) as exc:
        print(f"degenerate problem: {exc}", file=sys.stderr)
        return 2
    except SomosError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError, KeyError, json.JSONDecodeError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
