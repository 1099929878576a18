"""Command-line front end.

Commands write plot-ready CSV and JSON; nothing is plotted.  Exit codes are
0 on success, 2 on usage or argument errors (including unwritable outputs) and
3 on numeric or degeneracy failures.  Every command that writes files prints a
JSON manifest naming them on standard output.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time

import numpy as np

from . import __version__
from .intensity import RWQuoteModel, fixed_point, rho_curve, write_rho_curve
from .market_sim import (
    Adaptive,
    Fixed,
    GameConfig,
    make_rng,
    run,
    run_reversed,
    write_trajectory_csv,
)
from .projective import DegenerateError, DomainError, unit_invariance_deviation
from .strategy import (
    GaussianStrategy,
    GridWavefunction,
    density,
    export_curve,
    fourier_dual,
    risk_expectation,
    supply_curve,
)
from ._io import atomic_write_text

EXIT_OK, EXIT_USAGE, EXIT_NUMERIC = 0, 2, 3
INVARIANCE_TOL = 1e-12


class UsageError(Exception):
    pass


class NumericFailure(Exception):
    pass


def _manifest(command, params, outputs, started, seed=None):
    return {
        "command": command,
        "parameters": params,
        "seed": seed,
        "version": __version__,
        "outputs": [str(p) for p in outputs],
        "wall_clock_seconds": round(time.perf_counter() - started, 6),
    }


def _emit(doc):
    print(json.dumps(doc, indent=2))


def _write(fn, *args):
    try:
        return fn(*args)
    except OSError as exc:
        raise UsageError(f"cannot write output: {exc}") from exc


def cmd_rho_curve(args):
    started = time.perf_counter()
    model = RWQuoteModel(args.m)
    a, r = rho_curve(model, args.a_min, args.a_max, args.steps)
    _write(write_rho_curve, args.out, a, r)
    params = {"m": args.m, "a_min": args.a_min, "a_max": args.a_max, "steps": args.steps}
    _emit(_manifest("rho-curve", params, [args.out], started))


def cmd_fixed_point(args):
    res = fixed_point(RWQuoteModel(args.m), tol=args.tol)
    _emit({
        "m": args.m,
        "a_max": res.a_max,
        "rho": res.rho_at_max,
        "iterations": res.iterations,
        "method": res.method,
    })


def _parse_policy(text):
    kind, _, value = text.partition(":")
    try:
        x = float(value) if value else 0.0
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad policy value in {text!r}") from None
    if not math.isfinite(x):
        raise argparse.ArgumentTypeError(f"policy value must be finite: {text!r}")
    if kind == "fixed" and value:
        return Fixed(x)
    if kind == "adaptive":
        return Adaptive(x)
    raise argparse.ArgumentTypeError(f"policy must be fixed:<a> or adaptive:<a1>, got {text!r}")


def cmd_simulate(args):
    started = time.perf_counter()
    config = GameConfig(m=args.m, seed=args.seed, cycles=args.cycles,
                        policy=args.policy, buy_leg=args.buy_leg)
    if args.trajectory and not isinstance(config.policy, Adaptive):
        raise UsageError("--trajectory needs an adaptive policy")
    result = run_reversed(config) if args.reversed else run(config)
    if not math.isfinite(result.empirical_intensity):
        raise NumericFailure("simulation produced a non-finite intensity")
    outputs = []
    if args.trajectory:
        _write(write_trajectory_csv, result, args.trajectory)
        outputs.append(args.trajectory)
    text = result.to_json(trajectory_csv=args.trajectory) + "\n"
    if args.out is None:
        sys.stdout.write(text)
        return
    _write(atomic_write_text, args.out, text)
    outputs.insert(0, args.out)
    _emit(_manifest("simulate", config.to_dict(), outputs, started, seed=args.seed))


def cmd_invariance(args):
    rng = make_rng(args.seed)
    scales = np.exp(rng.uniform(-math.log(1e3), math.log(1e3), size=(args.trials, 2)))
    try:
        worst = unit_invariance_deviation(args.p, args.q, args.upsilon, args.w, scales)
    except DegenerateError as exc:
        raise NumericFailure(f"degenerate cycle: {exc}") from exc
    passed = worst < INVARIANCE_TOL
    _emit({
        "p": args.p, "q": args.q, "upsilon": args.upsilon, "w": args.w,
        "trials": args.trials, "seed": args.seed,
        "max_deviation": worst, "tolerance": INVARIANCE_TOL, "passed": passed,
    })
    if not passed:
        raise NumericFailure(f"max deviation {worst:.3e} >= {INVARIANCE_TOL}")


def cmd_strategy(args):
    started = time.perf_counter()
    g = GaussianStrategy(args.a, args.width)
    if args.kind == "risk":
        value = risk_expectation(g, args.risk_m, args.hbar_e)
        _emit({"a": args.a, "width": args.width, "risk_m": args.risk_m,
               "hbar_e": args.hbar_e, "risk": value})
        return
    if args.out is None:
        raise UsageError(f"--out is required for kind {args.kind!r}")
    if args.kind == "dual":
        dual = fourier_dual(GridWavefunction.from_strategy(g, hbar_e=args.hbar_e))
        window = 12 * args.hbar_e / (2 * g.sigma)
        keep = np.abs(dual.grid) <= window
        x, v = dual.grid[keep], np.abs(dual.samples[keep])
    else:
        x = np.linspace(args.a - 6 * g.sigma, args.a + 6 * g.sigma, args.points)
        v = density(g, x) if args.kind == "density" else supply_curve(g, x)
    _write(export_curve, args.out, x, v)
    params = {"a": args.a, "width": args.width, "hbar_e": args.hbar_e, "kind": args.kind}
    _emit(_manifest("strategy", params, [args.out], started))


def _positive(text):
    x = float(text)
    if not (x > 0 and math.isfinite(x)):
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text!r}")
    return x


def _count(minimum):
    def parse(text):
        n = int(text)
        if n < minimum:
            raise argparse.ArgumentTypeError(f"expected an integer >= {minimum}, got {text!r}")
        return n
    return parse


def _seed(text):
    n = int(text)
    if not 0 <= n < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmarket", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rho-curve", help="sample the profit intensity rho(a) to CSV")
    p.add_argument("--m", type=_positive, default=1.0)
    p.add_argument("--a-min", type=float, default=-1.0)
    p.add_argument("--a-max", type=float, default=1.5)
    p.add_argument("--steps", type=_count(2), default=2501)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_rho_curve)

    p = sub.add_parser("fixed-point", help="solve rho(a) = a")
    p.add_argument("--m", type=_positive, default=1.0)
    p.add_argument("--tol", type=float, default=1e-12)
    p.set_defaults(func=cmd_fixed_point)

    p = sub.add_parser("simulate", help="Monte Carlo run of the buying-selling game")
    p.add_argument("--m", type=_positive, default=1.0)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--cycles", type=_count(1), default=1_000_000)
    p.add_argument("--policy", type=_parse_policy, default=Adaptive(0.0),
                   help="fixed:<a> or adaptive:<a1>")
    p.add_argument("--buy-leg", choices=["draw", "zero"], default="draw")
    p.add_argument("--reversed", action="store_true", help="play the reversed game")
    p.add_argument("--out", help="SimResult JSON path (default: standard output)")
    p.add_argument("--trajectory", help="adaptive trajectory CSV path")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("invariance", help="check unit invariance of the log cross ratio")
    p.add_argument("--p", type=float, required=True)
    p.add_argument("--q", type=float, required=True)
    p.add_argument("--upsilon", type=_positive, required=True)
    p.add_argument("--w", type=_positive, required=True)
    p.add_argument("--trials", type=_count(1), default=1000)
    p.add_argument("--seed", type=_seed, required=True)
    p.set_defaults(func=cmd_invariance)

    p = sub.add_parser("strategy", help="export a Gaussian strategy curve or its risk")
    p.add_argument("--a", type=float, default=0.0)
    p.add_argument("--width", type=_positive, default=1.0)
    p.add_argument("--hbar-e", type=_positive, default=1.0)
    p.add_argument("--risk-m", type=_positive, default=1.0)
    p.add_argument("--kind", choices=["density", "supply", "dual", "risk"], required=True)
    p.add_argument("--points", type=_count(2), default=401)
    p.add_argument("--out")
    p.set_defaults(func=cmd_strategy)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        args.func(args)
    except (UsageError, DomainError) as exc:
        print(f"qmarket {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (NumericFailure, DegenerateError, ArithmeticError) as exc:
        print(f"qmarket {args.command}: numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
