"""Executable checks of the repeated-integration formula and its consequences.

Every check produces a :class:`Report` comparing two independently computed
numbers. Most checks expect agreement; checks built around a known failure
(``expect="mismatch"``) pass when the discrepancy is exhibited, so that a
fully green suite always means "everything behaved as claimed".
"""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
import time
import warnings
from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Iterator

from tempus.delta import (
    ScaleFunction,
    delta_derivative,
    delta_integral,
    repeated_integral,
)
from tempus.errors import TempusError, ZeroPowerWarning
from tempus.fractional import (
    KernelVariant,
    alternating_binomial_sum,
    binomial_expanded_g,
    caputo_derivative,
    frac_integral,
    gamma,
)
from tempus.quadrature import DEFAULT_CONFIG, QuadratureConfig
from tempus.scalespec import scale_from_json
from tempus.timescale import Integers, RealInterval, TimeScale, generate

CSV_COLUMNS = ("check", "scale", "f", "order", "lhs", "rhs", "abs_err", "rel_err", "pass")


# {{{ reports


@dataclass
class Report:
    check: str
    lhs: float
    rhs: float
    tolerance: float
    scale: str = ""
    f: str = ""
    order: str = ""
    #: one of "match", "mismatch" or "info" (always passes)
    expect: str = "match"
    runtime_ms: float = 0.0
    note: str = ""

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def rel_err(self) -> float:
        return self.abs_err / max(1.0, abs(self.rhs))

    @property
    def agrees(self) -> bool:
        return self.abs_err <= self.tolerance or self.rel_err <= self.tolerance

    @property
    def passed(self) -> bool:
        if self.expect == "info":
            return math.isfinite(self.lhs) and math.isfinite(self.rhs)
        if self.expect == "mismatch":
            return not self.agrees
        return self.agrees

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d.update(abs_err=self.abs_err, rel_err=self.rel_err, passed=self.passed)
        return d

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        where = " ".join(x for x in (self.scale, self.f, self.order) if x)
        return (
            f"{status} {self.check} [{where}] lhs={self.lhs:.12g} rhs={self.rhs:.12g} "
            f"abs_err={self.abs_err:.3g} expect={self.expect}"
            + (f" ({self.note})" if self.note else "")
        )


@dataclass
class SuiteReport:
    reports: list[Report] = field(default_factory=list)

    @property
    def n_passed(self) -> int:
        return sum(r.passed for r in self.reports)

    @property
    def n_failed(self) -> int:
        return len(self.reports) - self.n_passed

    @property
    def ok(self) -> bool:
        return self.n_failed == 0

    def to_jsonl(self) -> str:
        return "".join(json.dumps(r.to_dict()) + "\n" for r in self.reports)

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in self.reports:
            writer.writerow([
                r.check, r.scale, r.f, r.order,
                repr(r.lhs), repr(r.rhs), repr(r.abs_err), repr(r.rel_err),
                "true" if r.passed else "false",
            ])
        return buf.getvalue()


def _timed(fn: Callable[[], Report]) -> Report:
    start = time.perf_counter()
    report = fn()
    report.runtime_ms = 1000.0 * (time.perf_counter() - start)
    return report


def _label(f: Callable[[float], float]) -> str:
    return getattr(f, "label", getattr(f, "__name__", "f"))

# }}}


# {{{ checks


def check_cauchy(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    n: int,
    tol: float = 1.0e-7,
    *,
    expect: str | None = None,
    scale: str = "",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> Report:
    """Compare *n*-fold repeated integration with the sigma-kernel integral of order *n*."""
    if expect is None:
        expect = "match" if n <= 2 else "info"

    def run() -> Report:
        lhs = repeated_integral(f, ts, a, t, n, config)
        rhs = frac_integral(f, ts, a, t, n, KernelVariant.SIGMA, config=config)
        return Report("cauchy", lhs, rhs, tol, scale or str(ts), _label(f), str(n), expect)

    return _timed(run)


def _nested_count_sum(t: int, n: int) -> int:
    """Number of chains ``t_0 < t_1 < ... < t_{n-1} < t`` in ``{0, ..., t - 1}``."""

    def chains(upper: int, depth: int) -> int:
        if depth == 0:
            return 1
        return sum(chains(u, depth - 1) for u in range(upper))

    return chains(t, n)


def counterexample_n3(t_max: int, t: int | None = None, n: int = 3) -> Report:
    """Exhibit the failure of the repeated-integration formula on the integers.

    Both sides are brute-force sums over ``{0, ..., t_max}`` with ``f = 1`` and
    ``a = 0``: the *n*-fold nested sum against
    ``sum((t - s - 1) ** (n - 1) for s < t) / (n - 1)!``. The report passes when
    the two differ.
    """
    if t_max < 3:
        raise ValueError("t_max must be at least 3")
    t = t_max if t is None else t
    if not 0 < t <= t_max:
        raise ValueError(f"t must lie in (0, {t_max}]")

    def run() -> Report:
        lhs = float(_nested_count_sum(t, n))
        rhs = sum((t - s - 1) ** (n - 1) for s in range(t)) / math.factorial(n - 1)
        report = Report(
            "counterexample", lhs, rhs, 1.0e-9, f"Z[0,{t_max}]", "1", str(n), "mismatch"
        )
        report.note = f"t={t}"
        if not report.passed:
            report.note += ", not a counterexample"
        return report

    return _timed(run)


def check_real_reduction(
    alpha: float, t: float, tol: float = 1.0e-6, *, config: QuadratureConfig = DEFAULT_CONFIG
) -> Report:
    """Fractional integral of ``1`` on ``[0, t]`` against ``t^alpha / Gamma(alpha + 1)``."""

    def run() -> Report:
        ts = generate(RealInterval(0.0, t))
        lhs = frac_integral(lambda s: 1.0, ts, 0.0, t, alpha, config=config)
        rhs = t**alpha / gamma(alpha + 1.0)
        return Report("real_reduction", lhs, rhs, tol, f"[0,{t:g}]", "1", f"{alpha:g}")

    return _timed(run)


def check_expansion_equivalence(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    n: int,
    tol: float = 1.0e-7,
    *,
    scale: str = "",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> Report:
    """Sigma-kernel integral of integer order against its binomial expansion."""

    def run() -> Report:
        lhs = frac_integral(f, ts, a, t, n, KernelVariant.SIGMA, config=config)
        rhs = binomial_expanded_g(f, ts, a, t, n, config)
        return Report("expansion", lhs, rhs, tol, scale or str(ts), _label(f), str(n))

    return _timed(run)


def check_kernel_divergence(
    ts: TimeScale,
    a: float,
    t: float,
    n: int = 2,
    f: Callable[[float], float] = ScaleFunction(lambda s: 1.0, "1"),
    tol: float = 1.0e-9,
    *,
    scale: str = "",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> list[Report]:
    """Repeated integral against both kernels: sigma agrees, the plain kernel does not."""
    scale = scale or str(ts)
    repeated = repeated_integral(f, ts, a, t, n, config)
    reports = []
    for kernel, expect in ((KernelVariant.SIGMA, "match"), (KernelVariant.PLAIN, "mismatch")):
        def run(kernel: KernelVariant = kernel, expect: str = expect) -> Report:
            value = frac_integral(f, ts, a, t, n, kernel, config=config)
            return Report(
                f"kernel_{kernel.value}", value, repeated, tol, scale, _label(f), str(n), expect
            )

        reports.append(_timed(run))

    return reports


def check_alternating_sum(n: int, tol: float = 1.0e-15) -> Report:
    return _timed(lambda: Report(
        "alternating_sum", alternating_binomial_sum(n), 0.0, tol, "", "", str(n)
    ))


def sample_points(ts: TimeScale, a: float, t: float, dense_samples: int = 3) -> list[float]:
    """Points of ``[a, t) ∩ T``: every scattered point plus a few per dense piece."""
    points = []
    for seg in ts.decompose(a, t):
        if hasattr(seg, "mu"):
            points.append(seg.s)
        else:
            width = seg.b - seg.a
            points.extend(seg.a + width * k / dense_samples for k in range(dense_samples))
    return points


def check_delta_square(
    ts: TimeScale, s: float, tol: float = 1.0e-6, *, scale: str = ""
) -> Report:
    """Delta derivative of ``t^2`` against ``t + sigma(t)``."""

    def run() -> Report:
        lhs = delta_derivative(lambda x: x * x, ts, s)
        rhs = s + ts.sigma(s)
        report = Report("delta_square", lhs, rhs, tol, scale or str(ts), "t^2", "1")
        report.note = f"t={s:.12g}"
        return report

    return _timed(run)


def check_square_integral(
    ts: TimeScale,
    a: float,
    t: float,
    tol: float = 1.0e-8,
    *,
    scale: str = "",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> Report:
    """``int_a^t (s + sigma(s)) Delta s`` against ``t^2 - a^2``."""

    def run() -> Report:
        lhs = delta_integral(lambda s: s + ts.sigma(s), ts, a, t, config)
        return Report(
            "square_integral", lhs, t * t - a * a, tol, scale or str(ts), "t+sigma(t)", "1"
        )

    return _timed(run)


def check_alpha_one(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    tol: float = 1.0e-9,
    *,
    scale: str = "",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> list[Report]:
    reference = delta_integral(f, ts, a, t, config)
    return [
        _timed(lambda kernel=kernel: Report(
            f"alpha_one_{kernel.value}",
            frac_integral(f, ts, a, t, 1.0, kernel, config=config),
            reference, tol, scale or str(ts), _label(f), "1",
        ))
        for kernel in KernelVariant
    ]


def check_caputo_constant(
    ts: TimeScale,
    a: float,
    t: float,
    alpha: float,
    tol: float = 1.0e-6,
    *,
    scale: str = "",
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> Report:
    def run() -> Report:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ZeroPowerWarning)
            lhs = caputo_derivative(lambda s: 3.0, ts, a, t, alpha, config=config)
        return Report("caputo_constant", lhs, 0.0, tol, scale or str(ts), "3", f"{alpha:g}")

    return _timed(run)

# }}}


# {{{ suite

DEFAULT_SUITE: dict[str, Any] = {
    "scales": {
        "Z[0,5]": {"generator": "integers(0, 5)"},
        "[0,1]": {"generator": "real_interval(0, 1)"},
        "q^k(0.5,0..6)": {"generator": "q_scale(0.5, 0, 6)"},
        "[0,1]u{2,3}": {"pieces": [[0, 1], [2, 2], [3, 3]]},
    },
    "functions": ["1", "t", "t^2", "sin(t)"],
    "checks": [
        "cauchy",
        "cauchy_n3",
        "counterexample",
        "real_reduction",
        "expansion",
        "kernel_divergence",
        "alternating_sum",
        "delta_square",
        "square_integral",
        "alpha_one",
        "caputo_constant",
    ],
    "tolerance": 1.0e-7,
}


def _scale_window(doc: dict[str, Any], ts: TimeScale) -> tuple[float, float]:
    return float(doc.get("a", ts.min)), float(doc.get("t", ts.max))


def _n3_expectation(ts: TimeScale) -> str:
    # the formula holds on the reals for every n and is known to fail on Z
    if len(ts.pieces) == 1 and not ts.is_discrete:
        return "match"
    if ts.is_discrete and all(float(p[0]).is_integer() for p in ts.pieces) and all(
        b - a == 1.0 for a, b in itertools.pairwise(ts.points())
    ):
        return "mismatch"
    return "info"


def _suite_checks(config: dict[str, Any]) -> Iterator[Callable[[], list[Report]]]:
    scales = {
        name: (scale_from_json(doc), *_scale_window(doc, scale_from_json(doc)))
        for name, doc in config["scales"].items()
    }
    functions = [ScaleFunction.from_expr(text) for text in config["functions"]]
    tol = float(config.get("tolerance", 1.0e-7))
    checks = config["checks"]

    if "cauchy" in checks:
        for (name, (ts, a, t)), f, n in itertools.product(scales.items(), functions, (1, 2)):
            yield lambda f=f, ts=ts, a=a, t=t, n=n, name=name: [
                check_cauchy(f, ts, a, t, n, tol, scale=name)
            ]

    if "cauchy_n3" in checks:
        for name, (ts, a, t) in scales.items():
            f = ScaleFunction(lambda s: 1.0, "1")
            yield lambda f=f, ts=ts, a=a, t=t, name=name: [
                check_cauchy(f, ts, a, t, 3, tol, expect=_n3_expectation(ts), scale=name)
            ]

    if "counterexample" in checks:
        for t in range(3, 9):
            yield lambda t=t: [counterexample_n3(t)]

    if "real_reduction" in checks:
        for alpha, t in itertools.product((0.5, 1.5, 2.5), (0.5, 1.0, 2.0)):
            yield lambda alpha=alpha, t=t: [check_real_reduction(alpha, t, 1.0e-6)]

    if "expansion" in checks:
        for (name, (ts, a, t)), f, n in itertools.product(
            scales.items(), functions, range(1, 6)
        ):
            yield lambda f=f, ts=ts, a=a, t=t, n=n, name=name: [
                check_expansion_equivalence(f, ts, a, t, n, tol, scale=name)
            ]

    if "kernel_divergence" in checks:
        z = generate(Integers(0, 5))
        yield lambda: check_kernel_divergence(z, 0.0, 3.0, 2, scale="Z[0,5]")

    if "alternating_sum" in checks:
        for n in range(2, 7):
            yield lambda n=n: [check_alternating_sum(n)]

    if "delta_square" in checks:
        for name, (ts, a, t) in scales.items():
            yield lambda ts=ts, a=a, t=t, name=name: [
                check_delta_square(ts, s, 1.0e-6, scale=name)
                for s in sample_points(ts, a, t)
            ]

    if "square_integral" in checks:
        for name, (ts, a, t) in scales.items():
            yield lambda ts=ts, a=a, t=t, name=name: [
                check_square_integral(ts, a, t, 1.0e-8, scale=name)
            ]

    if "alpha_one" in checks:
        for (name, (ts, a, t)), f in itertools.product(scales.items(), functions):
            yield lambda f=f, ts=ts, a=a, t=t, name=name: check_alpha_one(
                f, ts, a, t, 1.0e-9, scale=name
            )

    if "caputo_constant" in checks:
        for name, (ts, a, t) in scales.items():
            yield lambda ts=ts, a=a, t=t, name=name: [
                check_caputo_constant(ts, a, t, 0.5, 1.0e-6, scale=name)
            ]


KNOWN_CHECKS = frozenset(DEFAULT_SUITE["checks"])


def run_suite(config: dict[str, Any] | None = None) -> SuiteReport:
    """Run every configured check; a check that raises is recorded as a failure.

    *config* overrides keys of :data:`DEFAULT_SUITE`.
    """
    merged = {**DEFAULT_SUITE, **(config or {})}
    unknown = set(merged["checks"]) - KNOWN_CHECKS
    if unknown:
        raise ValueError(f"unknown checks: {', '.join(sorted(unknown))}")

    suite = SuiteReport()
    for job in _suite_checks(merged):
        try:
            suite.reports.extend(job())
        except (TempusError, ArithmeticError) as exc:
            suite.reports.append(Report(
                "error", math.nan, math.nan, 0.0, note=f"{type(exc).__name__}: {exc}"
            ))

    return suite

# }}}
