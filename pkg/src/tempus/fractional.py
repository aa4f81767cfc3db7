"""Fractional integrals and derivatives of Riemann-Liouville type on time scales.

The central operator is :func:`frac_integral`,

.. math::

    I_a^\\alpha f(t) = \\frac{1}{\\Gamma(\\alpha)}
        \\int_a^t (t - \\sigma(s))^{\\alpha - 1} f(s) \\Delta s,

whose kernel contains the forward jump :math:`\\sigma(s)` so that integer
orders agree with repeated delta integration for ``alpha in {1, 2}``. The
older kernel :math:`(t - s)^{\\alpha - 1}` is kept as
:attr:`KernelVariant.PLAIN` for comparison.
"""

from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass, replace
from typing import Callable

from tempus.delta import (
    dense_derivative_noise,
    delta_integral,
    iterated_delta_derivative,
)
from tempus.errors import (
    NonPositiveArgument,
    ReversedBounds,
    SingularTerm,
    ZeroPowerWarning,
)
from tempus.quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate
from tempus.timescale import Continuous, Scattered, TimeScale, snap_tol

MAX_ORDER = 50.0

# inner integrals of the RL derivative are differenced, so they need headroom
DIFFERENCED_TOL = 1.0e-13

# {{{ gamma

_LANCZOS_G = 7
_LANCZOS_COEFFS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)


def gamma(x: float) -> float:
    """Euler's gamma function for ``x > 0`` (Lanczos, ``g = 7``, 9 terms)."""
    if not x > 0:
        raise NonPositiveArgument(f"gamma is only defined here for x > 0, got {x}")
    if x < 0.5:
        # the series loses accuracy close to the pole at zero
        return gamma(x + 1.0) / x
    if float(x).is_integer() and x <= 23:
        return float(math.factorial(int(x) - 1))

    x -= 1.0
    acc = _LANCZOS_COEFFS[0]
    for i, c in enumerate(_LANCZOS_COEFFS[1:], start=1):
        acc += c / (x + i)

    tt = x + _LANCZOS_G + 0.5
    return math.sqrt(2.0 * math.pi) * tt ** (x + 0.5) * math.exp(-tt) * acc

# }}}


# {{{ configuration types


class KernelVariant(enum.Enum):
    #: kernel ``(t - sigma(s)) ** (alpha - 1)``
    SIGMA = "sigma"
    #: legacy kernel ``(t - s) ** (alpha - 1)``
    PLAIN = "plain"


class ZeroPowerPolicy(enum.Enum):
    """Treatment of ``0 ** (alpha - 1)`` with ``alpha < 1``.

    This only happens at a scattered point *s* with ``sigma(s) == t``.
    """

    #: drop the term (``0 ** (alpha - 1) := 0``) and issue a :class:`ZeroPowerWarning`
    CONVENTION = "zero"
    #: raise :class:`~tempus.errors.SingularTerm`
    STRICT = "strict"


@dataclass(frozen=True)
class FracOrder:
    """A positive order *alpha* with ``n = ceil(alpha)``."""

    alpha: float

    def __post_init__(self) -> None:
        if not (0.0 < self.alpha <= MAX_ORDER):
            raise ValueError(f"order must lie in (0, {MAX_ORDER:g}], got {self.alpha}")

    @property
    def n(self) -> int:
        return max(1, math.ceil(self.alpha))

    @property
    def is_integer(self) -> bool:
        return float(self.alpha).is_integer()

# }}}


# {{{ integrals


def frac_integral(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    alpha: float,
    kernel: KernelVariant = KernelVariant.SIGMA,
    zero_power: ZeroPowerPolicy = ZeroPowerPolicy.CONVENTION,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Left fractional integral of order *alpha* of *f* from *a* to *t*.

    Scattered points contribute ``mu(s) * K ** (alpha - 1) * f(s)``. A dense
    piece ending at *t* with ``alpha < 1`` has an integrable endpoint
    singularity, which is removed by the substitution ``v = (t - s) ** alpha``
    before quadrature.
    """
    order = FracOrder(alpha)
    alpha = order.alpha
    a, t = ts.snap(a), ts.snap(t)
    if t < a:
        raise ReversedBounds(f"lower bound {a} exceeds upper bound {t}")

    exponent = alpha - 1.0
    total = 0.0
    dropped = False
    for seg in ts.decompose(a, t):
        if isinstance(seg, Scattered):
            base = seg.s if kernel is KernelVariant.PLAIN else ts.sigma(seg.s)
            k = t - base
            if k <= snap_tol(t):
                k = 0.0

            if k == 0.0 and exponent < 0.0:
                if zero_power is ZeroPowerPolicy.STRICT:
                    raise SingularTerm(
                        f"kernel term 0 ** {exponent:g} at s = {seg.s} "
                        f"(sigma(s) = t = {t})"
                    )
                dropped = True
                continue

            total += seg.mu * k**exponent * f(seg.s)
        elif exponent < 0.0 and seg.b == t:
            c = seg.a

            def substituted(v: float, c: float = c) -> float:
                return f(max(c, t - v ** (1.0 / alpha)))

            total += integrate(substituted, 0.0, (t - c) ** alpha, config) / alpha
        else:

            def kernelled(s: float) -> float:
                return (t - s) ** exponent * f(s)

            total += integrate(kernelled, seg.a, seg.b, config)

    if dropped:
        warnings.warn(
            f"dropped divergent kernel term for alpha = {alpha:g} at t = {t:g}",
            ZeroPowerWarning,
            stacklevel=2,
        )

    return total / gamma(alpha)


def binomial_expanded_g(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    n: int,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    r"""Integer-order sigma-kernel integral expanded by the binomial theorem.

    .. math::

        \sum_{k = 0}^{n - 1} \frac{(-1)^k}{k! (n - 1 - k)!} t^{n - 1 - k}
            \int_a^t \sigma(s)^k f(s) \Delta s

    Algebraically equal to ``frac_integral(f, ts, a, t, n)`` for every *n*.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")
    a, t = ts.snap(a), ts.snap(t)
    if t < a:
        raise ReversedBounds(f"lower bound {a} exceeds upper bound {t}")

    total = 0.0
    for k in range(n):
        def moment(s: float, k: int = k) -> float:
            return ts.sigma(s) ** k * f(s)

        coeff = (-1) ** k / (math.factorial(k) * math.factorial(n - 1 - k))
        total += coeff * t ** (n - 1 - k) * delta_integral(moment, ts, a, t, config)

    return total


def alternating_binomial_sum(n: int) -> float:
    """``sum((-1)**k / (k! (n-1-k)!) for k < n)``, zero for every ``n >= 2``."""
    return math.fsum(
        (-1) ** k / (math.factorial(k) * math.factorial(n - 1 - k)) for k in range(n)
    )

# }}}


# {{{ derivatives


def rl_derivative(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    alpha: float,
    zero_power: ZeroPowerPolicy = ZeroPowerPolicy.CONVENTION,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Riemann-Liouville derivative: ``n`` delta derivatives of ``I^(n - alpha) f``.

    Integer orders skip the integral (``I^0 f = f``). Differences are taken on
    ``[a, max T] ∩ T`` only, since the inner integral is undefined left of *a*.
    """
    order = FracOrder(alpha)
    if order.is_integer:
        return iterated_delta_derivative(f, ts, t, order.n)

    window = ts.restrict(a, None)
    inner_order = order.n - order.alpha
    config = replace(
        config,
        abs_tol=min(config.abs_tol, DIFFERENCED_TOL),
        rel_tol=min(config.rel_tol, DIFFERENCED_TOL),
    )

    def inner(tau: float) -> float:
        return frac_integral(
            f, ts, a, tau, inner_order, KernelVariant.SIGMA, zero_power, config
        )

    return iterated_delta_derivative(inner, window, t, order.n)


def caputo_derivative(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    alpha: float,
    zero_power: ZeroPowerPolicy = ZeroPowerPolicy.CONVENTION,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Caputo derivative: ``I^(n - alpha)`` applied to the ``n``-th delta derivative."""
    order = FracOrder(alpha)

    def derivative(s: float) -> float:
        return iterated_delta_derivative(f, ts, s, order.n)

    if order.is_integer:
        return derivative(t)

    if any(isinstance(seg, Continuous) for seg in ts.decompose(a, t)):
        # no point integrating finite-difference noise to a tighter tolerance
        noise = dense_derivative_noise(order.n)
        config = replace(
            config,
            abs_tol=max(config.abs_tol, noise),
            rel_tol=max(config.rel_tol, noise),
        )

    return frac_integral(
        derivative,
        ts,
        a,
        t,
        order.n - order.alpha,
        KernelVariant.SIGMA,
        zero_power,
        config,
    )

# }}}
