"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 computation error, 3 failed
verification, 4 I/O error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import warnings
from typing import Any, Sequence

from tempus.delta import ScaleFunction
from tempus.errors import SingularTerm, TempusError, ZeroPowerWarning
from tempus.fractional import (
    MAX_ORDER,
    KernelVariant,
    ZeroPowerPolicy,
    caputo_derivative,
    frac_integral,
    rl_derivative,
)
from tempus.quadrature import QuadratureConfig
from tempus.scalespec import loads_scale, parse_generator, parse_pieces
from tempus.timescale import Scattered, TimeScale, generate
from tempus.verify import DEFAULT_SUITE, KNOWN_CHECKS, run_suite

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_COMPUTE = 2
EXIT_VERIFY = 3
EXIT_IO = 4

TOL_ENV = "TEMPUS_FRAC_TOL"

KERNELS = {"sigma": KernelVariant.SIGMA, "legacy": KernelVariant.PLAIN}
POLICIES = {"zero": ZeroPowerPolicy.CONVENTION, "strict": ZeroPowerPolicy.STRICT}


class UsageError(Exception):
    pass


class InputOutputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def fmt(x: float) -> str:
    return f"{x:.12g}"


# {{{ argument helpers


def _add_scale_args(p: argparse.ArgumentParser) -> None:
    group = p.add_mutually_exclusive_group(required=True)
    group.add_argument("--generator", help='e.g. "integers(0,5)" or "q_scale(0.5,0,3)"')
    group.add_argument("--pieces", help='inline JSON list, e.g. "[[0,1],[2,2]]"')
    group.add_argument("--scale-file", help="JSON document with pieces or generator")


def _add_eval_args(p: argparse.ArgumentParser) -> None:
    _add_scale_args(p)
    p.add_argument("-f", "--function", required=True, help='expression in t, e.g. "sin(t)"')
    p.add_argument("-a", type=float, required=True, help="lower limit")
    p.add_argument("-t", type=float, required=True, help="evaluation point")
    p.add_argument("--alpha", type=float, required=True, help="order, 0 < alpha <= 50")
    p.add_argument("--zero-power", choices=sorted(POLICIES), default="zero",
                   help="treatment of 0^(alpha-1) for alpha < 1 (default: zero)")
    p.add_argument("--abs-tol", type=float, default=None)
    p.add_argument("--rel-tol", type=float, default=None)
    p.add_argument("--max-depth", type=int, default=50)


def _resolve_scale(args: argparse.Namespace) -> TimeScale:
    if args.generator is not None:
        return generate(parse_generator(args.generator))
    if args.pieces is not None:
        return parse_pieces(args.pieces)
    try:
        with open(args.scale_file, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputOutputError(f"cannot read {args.scale_file}: {exc.strerror}") from None
    return loads_scale(text)


def _quadrature_config(args: argparse.Namespace) -> QuadratureConfig:
    default = QuadratureConfig()
    env = os.environ.get(TOL_ENV)
    base_abs, base_rel = default.abs_tol, default.rel_tol
    if env:
        try:
            base_abs = base_rel = float(env)
        except ValueError:
            raise UsageError(f"{TOL_ENV} must be a number, got {env!r}") from None
    try:
        return QuadratureConfig(
            abs_tol=base_abs if args.abs_tol is None else args.abs_tol,
            rel_tol=base_rel if args.rel_tol is None else args.rel_tol,
            max_depth=args.max_depth,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _check_member(ts: TimeScale, name: str, value: float) -> float:
    if value not in ts:
        raise UsageError(f"-{name} {value:g} is not a point of the time scale {ts}")
    return ts.snap(value)


def _eval_setup(args: argparse.Namespace) -> tuple[TimeScale, ScaleFunction, float, float]:
    if not 0.0 < args.alpha <= MAX_ORDER:
        raise UsageError(f"--alpha must lie in (0, {MAX_ORDER:g}]")
    ts = _resolve_scale(args)
    a = _check_member(ts, "a", args.a)
    t = _check_member(ts, "t", args.t)
    if t < a:
        raise UsageError("-t must not be smaller than -a")
    return ts, ScaleFunction.from_expr(args.function), a, t


def _write_output(text: str, path: str | None) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputOutputError(f"cannot write {path}: {exc.strerror}") from None


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()

# }}}


# {{{ commands


def cmd_scale_info(args: argparse.Namespace) -> int:
    ts = _resolve_scale(args)
    points = args.at if args.at else ts.points()
    rows = []
    for t in points:
        t = _check_member(ts, "-at", t)
        rows.append((t, ts.sigma(t), ts.rho(t), ts.mu(t), str(ts.classify(t))))

    if args.format == "csv":
        _write_output(
            _csv_text(("t", "sigma", "rho", "mu", "class"),
                      [(repr(t), repr(s), repr(r), repr(m), c) for t, s, r, m, c in rows]),
            args.output,
        )
        return EXIT_OK

    n_isolated = sum(1 for left, right in ts.pieces if left == right)
    lines = [
        f"scale: {ts}",
        f"pieces: {len(ts.pieces)} ({len(ts.pieces) - n_isolated} intervals, "
        f"{n_isolated} isolated points)",
        f"min: {fmt(ts.min)}  max: {fmt(ts.max)}",
        "",
        f"{'t':>14} {'sigma':>14} {'rho':>14} {'mu':>14}  class",
    ]
    lines += [
        f"{fmt(t):>14} {fmt(s):>14} {fmt(r):>14} {fmt(m):>14}  {c}"
        for t, s, r, m, c in rows
    ]
    _write_output("\n".join(lines) + "\n", args.output)
    return EXIT_OK


def _sweep_points(ts: TimeScale, a: float, t: float, samples: int) -> list[float]:
    points = []
    for seg in ts.decompose(a, t):
        if isinstance(seg, Scattered):
            points.append(seg.s)
        else:
            width = seg.b - seg.a
            points.extend(seg.a + width * k / samples for k in range(samples))
    points.append(t)
    return points


def cmd_frac_int(args: argparse.Namespace) -> int:
    ts, f, a, t = _eval_setup(args)
    config = _quadrature_config(args)
    kernels = (
        [KernelVariant.SIGMA, KernelVariant.PLAIN] if args.both else [KERNELS[args.kernel]]
    )
    policy = POLICIES[args.zero_power]

    def values(tau: float) -> list[float]:
        return [frac_integral(f, ts, a, tau, args.alpha, k, policy, config) for k in kernels]

    names = ["legacy" if k is KernelVariant.PLAIN else "sigma" for k in kernels]
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ZeroPowerWarning)
        if args.sweep_t:
            rows = [
                (repr(tau), *(repr(v) for v in values(tau)))
                for tau in _sweep_points(ts, a, t, args.samples)
            ]
            text = _csv_text(("t", *names), rows)
        elif len(kernels) == 1:
            text = fmt(values(t)[0]) + "\n"
        else:
            text = "".join(f"{n}={fmt(v)}\n" for n, v in zip(names, values(t)))

    _report_zero_power(caught)
    _write_output(text, args.output)
    return EXIT_OK


def cmd_frac_der(args: argparse.Namespace) -> int:
    ts, f, a, t = _eval_setup(args)
    config = _quadrature_config(args)
    policy = POLICIES[args.zero_power]
    op = rl_derivative if args.type == "rl" else caputo_derivative

    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", ZeroPowerWarning)
        value = op(f, ts, a, t, args.alpha, policy, config)

    _report_zero_power(caught)
    _write_output(fmt(value) + "\n", args.output)
    return EXIT_OK


def _report_zero_power(caught: list[warnings.WarningMessage]) -> None:
    if any(issubclass(w.category, ZeroPowerWarning) for w in caught):
        print(
            "note: zero_power_applied=true (a term 0^(alpha-1) with alpha < 1 was "
            "dropped; use --zero-power strict to reject it)",
            file=sys.stderr,
        )


def cmd_verify(args: argparse.Namespace) -> int:
    config: dict[str, Any] = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                config = json.load(fh)
        except OSError as exc:
            raise InputOutputError(f"cannot read {args.config}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(
                f"{args.config}: line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from None
        if not isinstance(config, dict):
            raise UsageError(f"{args.config}: suite config must be a JSON object")

    if args.only:
        unknown = set(args.only) - KNOWN_CHECKS
        if unknown:
            raise UsageError(
                f"unknown check(s) {', '.join(sorted(unknown))}; "
                f"choose from {', '.join(DEFAULT_SUITE['checks'])}"
            )
        config["checks"] = list(args.only)

    try:
        suite = run_suite(config)
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    for report in suite.reports:
        print(report.summary())
    print(f"{suite.n_passed} passed, {suite.n_failed} failed")

    if args.csv:
        _write_output(suite.to_csv(), args.csv)
    if args.jsonl:
        _write_output(suite.to_jsonl(), args.jsonl)

    return EXIT_OK if suite.ok else EXIT_VERIFY

# }}}


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="tempus", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("scale-info", help="print sigma, rho and mu on a time scale")
    _add_scale_args(p)
    p.add_argument("--at", type=float, action="append", help="sample point (repeatable)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_scale_info)

    p = sub.add_parser("frac-int", help="fractional integral of order alpha")
    _add_eval_args(p)
    p.add_argument("--kernel", choices=sorted(KERNELS), default="sigma")
    p.add_argument("--both", action="store_true", help="print sigma and legacy kernels")
    p.add_argument("--sweep-t", action="store_true",
                   help="emit CSV over the scale points of [a, t]")
    p.add_argument("--samples", type=int, default=8,
                   help="sweep points per dense piece (default: 8)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_frac_int)

    p = sub.add_parser("frac-der", help="Riemann-Liouville or Caputo derivative")
    _add_eval_args(p)
    p.add_argument("--type", choices=("rl", "caputo"), default="rl")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_frac_der)

    p = sub.add_parser("verify", help="run the verification suite")
    p.add_argument("--config", help="JSON suite config overriding the defaults")
    p.add_argument("--only", action="append", help="run only this check (repeatable)")
    p.add_argument("--csv", help="write the report table as CSV")
    p.add_argument("--jsonl", help="write one JSON object per report")
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"tempus: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InputOutputError as exc:
        print(f"tempus: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except TempusError as exc:
        hint = ""
        if isinstance(exc, SingularTerm):
            hint = " (hint: use --zero-power zero to drop the divergent term)"
        print(f"tempus: {type(exc).__name__}: {exc}{hint}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
