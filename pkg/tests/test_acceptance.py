"""Acceptance criteria, one test each, at the stated tolerances.

Every test prints a single ``ACCEPT <n> PASS|FAIL`` line. Run with
``pytest tests/test_acceptance.py -s`` (the lines are printed either way).
"""

from __future__ import annotations

import math
import subprocess
import sys
import time
import warnings
from pathlib import Path

import pytest

from oracles import nested_sum, product_trapezoid_rl, rl_derivative_dense
from tempus.delta import ScaleFunction, delta_derivative, delta_integral, repeated_integral
from tempus.errors import ZeroPowerWarning
from tempus.expr import ExprSyntaxError, parse
from tempus.fractional import (
    KernelVariant,
    alternating_binomial_sum,
    binomial_expanded_g,
    caputo_derivative,
    frac_integral,
    rl_derivative,
)
from tempus.timescale import Integers, QScale, RealInterval, UnionOf, generate
from tempus.verify import (
    DEFAULT_SUITE,
    check_alpha_one,
    check_caputo_constant,
    check_delta_square,
    check_kernel_divergence,
    check_square_integral,
    counterexample_n3,
    run_suite,
    sample_points,
)

TESTS_DIR = Path(__file__).parent
MODULE_START = time.perf_counter()

ONE = ScaleFunction(lambda s: 1.0, "1")
FUNCTIONS = [ScaleFunction.from_expr(text) for text in DEFAULT_SUITE["functions"]]

# (scale, a, t) on every generator kind
GENERATOR_SCALES = {
    "integers": (generate(Integers(0, 5)), 0.0, 5.0),
    "real_interval": (generate(RealInterval(0, 1)), 0.0, 1.0),
    "q_scale": (generate(QScale(0.5, 0, 6)), 0.5**6, 1.0),
    "union": (generate(UnionOf(RealInterval(0, 1), Integers(2, 3))), 0.0, 3.0),
}


@pytest.fixture
def verdict(capsys):
    def report(number: int, ok: bool, detail: str) -> None:
        with capsys.disabled():
            print(f"\nACCEPT {number} {'PASS' if ok else 'FAIL'}: {detail}")
        assert ok, detail

    return report


def test_1_cauchy_two_fold(verdict):
    start = time.perf_counter()
    suite = run_suite({"checks": ["cauchy"]})
    elapsed = time.perf_counter() - start

    two_fold = [r for r in suite.reports if r.order == "2"]
    worst = max(r.abs_err for r in two_fold)
    discrete = [r for r in two_fold if r.scale in ("Z[0,5]", "q^k(0.5,0..6)")]
    worst_discrete = max(r.abs_err for r in discrete)

    ok = (
        len(two_fold) == 16
        and suite.ok
        and worst <= 1e-7
        and len(discrete) == 8
        and worst_discrete <= 1e-12
        and elapsed < 10.0
    )
    verdict(1, ok, f"n=2 matrix {len(two_fold)} cells, max err {worst:.2e}, "
                   f"discrete max err {worst_discrete:.2e}, {elapsed:.2f}s")


def test_2_three_fold_counterexample(verdict):
    start = time.perf_counter()
    report = counterexample_n3(3)
    elapsed = time.perf_counter() - start

    # independent recomputation: triple nested sum and the 3-term kernel sum
    points = [0.0, 1.0, 2.0, 3.0]
    triple = nested_sum(lambda s: 1.0, points, 3, 3)
    kernel = sum((3 - (s + 1)) ** 2 / 2 for s in range(3))

    ok = (
        (report.lhs, report.rhs) == (1.0, 2.5) == (triple, kernel)
        and report.abs_err >= 1.0
        and report.passed
        and elapsed < 1.0
    )
    verdict(2, ok, f"triple sum {report.lhs:g}, kernel form {report.rhs:g}, "
                   f"discrepancy {report.abs_err:g}, {elapsed * 1000:.1f}ms")


def test_3_real_reduction(verdict):
    ts = generate(RealInterval(0, 2))
    worst = 0.0
    for alpha in (0.5, 1.5, 2.5):
        for t in (0.5, 1.0, 2.0):
            value = frac_integral(ONE, ts, 0.0, t, alpha)
            worst = max(worst, abs(value - t**alpha / math.gamma(alpha + 1)))
    verdict(3, worst <= 1e-6, f"max |I^a 1(t) - t^a/G(a+1)| = {worst:.2e} over 9 cases")


def test_4_kernel_divergence(verdict):
    z = generate(Integers(0, 5))
    sigma = frac_integral(ONE, z, 0, 3, 2)
    legacy = frac_integral(ONE, z, 0, 3, 2, KernelVariant.PLAIN)
    repeated = repeated_integral(ONE, z, 0, 3, 2)
    # hand sums over s = 0, 1, 2
    hand_sigma = sum(3 - s - 1 for s in range(3))
    hand_legacy = sum(3 - s for s in range(3))

    sigma_report, legacy_report = check_kernel_divergence(z, 0.0, 3.0, 2)
    ok = (
        (sigma, legacy) == (3.0, 6.0) == (hand_sigma, hand_legacy)
        and repeated == sigma != legacy
        and sigma_report.agrees
        and not legacy_report.agrees
        and sigma_report.passed
        and legacy_report.passed
    )
    verdict(4, ok, f"sigma kernel {sigma:g}, legacy kernel {legacy:g}, "
                   f"repeated integral {repeated:g}")


def test_5_motivating_identities(verdict):
    worst_square = 0.0
    for ts, a, t in GENERATOR_SCALES.values():
        for s in sample_points(ts, a, t):
            report = check_delta_square(ts, s)
            worst_square = max(worst_square, report.abs_err)

    z = generate(Integers(-5, 20))
    exact = all(
        delta_derivative(lambda x: x * x, z, float(t)) == 2 * t + 1 for t in range(-5, 20)
    )

    worst_integral = 0.0
    for ts, a, t in GENERATOR_SCALES.values():
        for end in sample_points(ts, a, t)[1:] + [t]:
            worst_integral = max(worst_integral, check_square_integral(ts, a, end).abs_err)

    ok = worst_square <= 1e-6 and exact and worst_integral <= 1e-8
    verdict(5, ok, f"(t^2)^D max err {worst_square:.2e}, Z forward difference exact={exact}, "
                   f"int (s+sigma) max err {worst_integral:.2e}")


def test_6_expansion_equivalence(verdict):
    worst = 0.0
    cells = 0
    for ts, a, t in GENERATOR_SCALES.values():
        for f in FUNCTIONS:
            for n in range(1, 6):
                direct = frac_integral(f, ts, a, t, n)
                expanded = binomial_expanded_g(f, ts, a, t, n)
                err = abs(direct - expanded) / max(1.0, abs(direct))
                worst = max(worst, err)
                cells += 1

    sums = [abs(alternating_binomial_sum(n)) for n in range(2, 7)]
    ok = worst <= 1e-7 and max(sums) <= 1e-15
    verdict(6, ok, f"expansion max err {worst:.2e} over {cells} cells, "
                   f"alternating sums max {max(sums):.1e}")


def test_7_operator_reductions(verdict):
    worst_alpha_one = 0.0
    worst_caputo = 0.0
    for ts, a, t in GENERATOR_SCALES.values():
        for f in FUNCTIONS:
            for report in check_alpha_one(f, ts, a, t):
                worst_alpha_one = max(worst_alpha_one, report.abs_err)
        for alpha in (0.5, 1.5, 2.5):
            # n-th delta derivatives on [a, t) need t <= rho^(n-1)(max T)
            end = t
            for _ in range(math.ceil(alpha) - 1):
                end = ts.rho(end)
            report = check_caputo_constant(ts, a, end, alpha)
            worst_caputo = max(worst_caputo, report.abs_err)

    # classical D^0.5 t = t^0.5 / G(1.5), for both RL and Caputo since f(0) = 0
    line = generate(RealInterval(0, 2))
    ident = ScaleFunction(lambda s: s, "t")
    worst_closed = 0.0
    worst_oracle = 0.0
    for t in (0.25, 0.5, 1.0, 1.5):
        closed = t**0.5 / math.gamma(1.5)
        oracle = rl_derivative_dense(lambda s: s, t, 0.5)
        # the oracle integral itself is exact for linear f
        assert abs(product_trapezoid_rl(lambda s: s, t, 0.5) - t**1.5 / math.gamma(2.5)) < 1e-12
        with warnings.catch_warnings():
            warnings.simplefilter("error", ZeroPowerWarning)
            rl = rl_derivative(ident, line, 0.0, t, 0.5)
            caputo = caputo_derivative(ident, line, 0.0, t, 0.5)
        worst_closed = max(worst_closed, abs(rl - closed), abs(caputo - closed))
        worst_oracle = max(worst_oracle, abs(rl - oracle), abs(caputo - oracle))

    ok = (
        worst_alpha_one <= 1e-9
        and worst_caputo <= 1e-6
        and worst_closed <= 1e-4
        and worst_oracle <= 1e-4
    )
    verdict(7, ok, f"alpha=1 max err {worst_alpha_one:.2e}, Caputo const max {worst_caputo:.2e}, "
                   f"D^0.5 t vs closed form {worst_closed:.2e}, vs oracle {worst_oracle:.2e}")


PROPERTY_SELECTION = " or ".join([
    "test_linearity",
    "test_additivity",
    "test_fundamental_theorem",
    "test_product_rule",
    "test_square_derivative",
    "test_jump_axioms",
    "test_decompose_concatenates",
    "test_decompose_measure",
    "test_precedence_table",
    "test_syntax_errors_are_positioned",
    "test_print_parse_fixpoint",
])


def test_8_property_suites(verdict):
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider",
         "tests/test_delta.py", "tests/test_timescale.py", "tests/test_expr.py",
         "-k", PROPERTY_SELECTION],
        cwd=TESTS_DIR.parent, capture_output=True, text=True,
    )
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr

    positioned = []
    for text, offset in (("1 +", 3), ("sin t", 4), ("(t", 2), ("t $ 2", 2)):
        try:
            parse(text)
        except ExprSyntaxError as exc:
            positioned.append(exc.offset == offset and f"offset {offset}" in str(exc))
        else:
            positioned.append(False)

    ok = proc.returncode == 0 and all(positioned)
    verdict(8, ok, f"property suites: {summary}; positioned diagnostics "
                   f"{sum(positioned)}/{len(positioned)}")


def test_9_desk_scale_runtime(verdict):
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", "tests",
         "--ignore", str(TESTS_DIR / "test_acceptance.py")],
        cwd=TESTS_DIR.parent, capture_output=True, text=True,
    )
    rest = time.perf_counter() - start
    acceptance = start - MODULE_START
    total = rest + acceptance
    summary = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr

    ok = proc.returncode == 0 and total < 60.0
    verdict(9, ok, f"whole suite {total:.1f}s (acceptance {acceptance:.1f}s, "
                   f"rest {rest:.1f}s): {summary}")
