"""Command-line front end: ``compensate``, ``bench``, ``verify`` and ``drift``.

Exit codes: 0 success, 1 computation or property failure, 2 usage error.
"""

import argparse
import logging
import sys
from dataclasses import replace
from decimal import Decimal, InvalidOperation

from . import verify as verify_mod
from .compensator import CompensationError, RatioEstimate, WindowParams, compensate
from .core import Convention, InputMagnitudeError
from .experiment import (
    ErrorSign,
    ExperimentConfig,
    emit,
    emit_drift,
    generate_samples,
    run_drift,
    run_table,
    sweep,
)
from .oracles import FpFormat, QuotientOrder, RoundingMode

log = logging.getLogger("bresenham_skew")

CONVENTIONS = {"td": Convention.TD_CONSISTENT, "def3": Convention.PAPER_DEF3}
FP_MODES = {f.value: f for f in FpFormat}
ROUNDINGS = {r.value: r for r in RoundingMode}
ORDERS = {o.value: o for o in QuotientOrder}
SIGNS = {s.value: s for s in ErrorSign}


def integer(text: str) -> int:
    """Parse ``1e9`` and ``1000000000`` alike; reject non-integral values."""
    try:
        value = Decimal(text.strip())
    except InvalidOperation:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not value.is_finite() or value != value.to_integral_value():
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")
    return int(value)


def real(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None


def integer_list(text: str) -> tuple[int, ...]:
    return tuple(integer(part) for part in text.split(",") if part.strip())


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bresenham-skew",
        description="Integer-only clock skew compensation with an extended Bresenham walk.",
    )
    parser.add_argument("-q", "--quiet", action="store_true", help="suppress progress on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compensate", help="compensate one hardware-clock reading")
    p.add_argument("--i", type=integer, required=True, help="hardware clock ticks")
    p.add_argument("--d", type=integer, required=True)
    p.add_argument("--a", type=integer, required=True)
    p.add_argument("--eps", type=real, default=1e-7)
    p.add_argument("--fp-mode", choices=FP_MODES, default="binary64")
    p.add_argument("--order", choices=ORDERS, default="div-first")
    p.add_argument("--convention", choices=CONVENTIONS, default="td")
    p.add_argument("--trace", action="store_true", help="print window, start point and walk length")

    p = sub.add_parser("bench", help="regenerate the compensation-error table")
    p.add_argument("--d", type=integer, default=1_000_000)
    p.add_argument("--samples", type=integer, default=1_000_000)
    p.add_argument("--skew-ppm", type=real, default=100.0)
    p.add_argument("--eps", type=real, default=1e-7)
    p.add_argument("--clocks", type=integer_list, default=(10**6, 10**7, 10**8, 10**9))
    p.add_argument("--seed", type=integer, default=0)
    p.add_argument("--rounding", choices=ROUNDINGS, default="floor")
    p.add_argument("--format", choices=("csv", "markdown"), default="csv")
    p.add_argument("--out", help="write here instead of stdout")
    p.add_argument("--preset", choices=("default", "published"), default="default",
                   help="'published' selects the variant whose proposed rows are a constant -1")
    p.add_argument("--convention", choices=CONVENTIONS)
    p.add_argument("--overshoot", type=integer)
    p.add_argument("--no-unit-shortcut", action="store_true")
    p.add_argument("--order", choices=ORDERS, default="mul-first",
                   help="float expression tree for the binary32/binary64 baselines")
    p.add_argument("--window-fp-mode", choices=FP_MODES, default="binary64")
    p.add_argument("--error-sign", choices=SIGNS, default="ref-minus-alg")
    p.add_argument("--threads", type=integer, default=1)
    p.add_argument("--sweep", action="store_true", help="tabulate every variant instead")

    p = sub.add_parser("verify", help="run the property suites")
    p.add_argument("--max-a", type=integer, default=64)
    p.add_argument("--random-trials", type=integer, default=100_000)
    p.add_argument("--seed", type=integer, default=0)
    p.add_argument("--mutant", choices=sorted(verify_mod.MUTANTS),
                   help="inject a known defect; the suites are expected to fail")

    p = sub.add_parser("drift", help="per-round drift of recursive logical-clock updates")
    p.add_argument("--rounds", type=integer, default=1000)
    p.add_argument("--interval", type=integer, default=1_000_000)
    p.add_argument("--seed", type=integer, default=0)
    p.add_argument("--d", type=integer, default=1_000_000)
    p.add_argument("--skew-ppm", type=real, default=100.0)
    p.add_argument("--eps", type=real, default=1e-7)
    p.add_argument("--order", choices=ORDERS, default="mul-first")
    p.add_argument("--out")
    return parser


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_compensate(args, parser) -> int:
    if args.i < 0 or args.d <= 0 or args.a <= 0:
        parser.error("need --i >= 0, --d > 0 and --a > 0")
    if args.eps < 0:
        parser.error("--eps must be non-negative")
    params = WindowParams(args.eps, FP_MODES[args.fp_mode], ORDERS[args.order])
    out = compensate(args.i, RatioEstimate(args.d, args.a), params, CONVENTIONS[args.convention])
    print(out.j)
    if args.trace:
        print(f"case={out.case_used.value}")
        print(f"window=[{out.candidate_lo}, {out.candidate_lo + out.candidate_count - 1}]")
        if out.start is not None:
            print(f"start=({out.start.x}, {out.start.y})")
        if out.final_td is not None:
            print(f"final_td={out.final_td.value} ({out.final_td.convention.value})")
        print(f"walk_steps={out.walk_steps}")
    return 0


def _bench_config(args, parser) -> ExperimentConfig:
    make = ExperimentConfig.published_table if args.preset == "published" else ExperimentConfig
    knobs = {}
    if args.convention is not None:
        knobs["convention"] = CONVENTIONS[args.convention]
    if args.overshoot is not None:
        knobs["overshoot"] = args.overshoot
    if args.no_unit_shortcut:
        knobs["unit_shortcut"] = False
    try:
        return make(
            D=args.d,
            sample_count=args.samples,
            skew_ppm=args.skew_ppm,
            epsilon=args.eps,
            clocks=args.clocks,
            seed=args.seed,
            rounding=ROUNDINGS[args.rounding],
            fp_window_mode=FP_MODES[args.window_fp_mode],
            baseline_order=ORDERS[args.order],
            error_sign=SIGNS[args.error_sign],
            workers=args.threads,
            **knobs,
        )
    except ValueError as exc:
        parser.error(str(exc))


def cmd_bench(args, parser) -> int:
    config = _bench_config(args, parser)
    samples = generate_samples(config)
    if args.sweep:
        lines = ["variant,algorithm,clock,max,min,avg"]
        for label, row in sweep(config, samples):
            s = row.stats
            lines.append(f"{label},{row.algorithm.value},{row.clock},{s.max},{s.min},{s.avg:#.6g}")
        _write("\n".join(lines) + "\n", args.out)
        return 0
    table = run_table(config, samples)
    _write(emit(table, args.format), args.out)
    return 0


def cmd_verify(args, parser) -> int:
    if args.max_a < 2 or args.random_trials < 1:
        parser.error("need --max-a >= 2 and --random-trials >= 1")
    if args.mutant:
        with verify_mod.inject_mutant(args.mutant):
            results = verify_mod.run_all(args.max_a, args.random_trials, args.seed)
    else:
        results = verify_mod.run_all(args.max_a, args.random_trials, args.seed)
    for result in results:
        print(result.line())
    return 0 if all(r.passed for r in results) else 1


def cmd_drift(args, parser) -> int:
    if args.rounds < 1 or args.interval < 0:
        parser.error("need --rounds >= 1 and --interval >= 0")
    try:
        config = ExperimentConfig(
            D=args.d, skew_ppm=args.skew_ppm, epsilon=args.eps, seed=args.seed,
            baseline_order=ORDERS[args.order],
        )
    except ValueError as exc:
        parser.error(str(exc))
    rows = run_drift(replace(config, sample_count=args.rounds), args.rounds, args.interval)
    _write(emit_drift(rows), args.out)
    return 0


COMMANDS = {"compensate": cmd_compensate, "bench": cmd_bench, "verify": cmd_verify, "drift": cmd_drift}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.WARNING if args.quiet else logging.INFO,
        format="%(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args, parser)
    except InputMagnitudeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except CompensationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
