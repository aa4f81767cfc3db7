"""Delta derivatives, delta integrals and repeated integration on time scales."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from tempus.errors import BoundaryDerivative, ReversedBounds
from tempus.quadrature import DEFAULT_CONFIG, QuadratureConfig, integrate
from tempus.timescale import Scattered, TimeScale

_EPS = float(np.finfo(np.float64).eps)

# step scale for dense-point differences, cbrt(machine epsilon)
DIFF_STEP = float(np.cbrt(_EPS))


def dense_derivative_noise(n: int) -> float:
    """Rough relative rounding noise of ``n`` nested dense differences.

    Every level divides by a step of size ``cbrt(eps)``, so the noise grows
    like ``eps ** (1 - n / 3)``.
    """
    return 100.0 * _EPS ** (1.0 - n / 3.0)


@dataclass(frozen=True)
class ScaleFunction:
    """A real function on a time scale, optionally labelled for reports.

    Any plain callable ``f(t) -> float`` is accepted wherever a
    :class:`ScaleFunction` is; this wrapper only adds a readable label.
    """

    fn: Callable[[float], float]
    label: str = "<callable>"

    def __call__(self, t: float) -> float:
        return float(self.fn(t))

    @classmethod
    def from_expr(cls, text: str) -> ScaleFunction:
        from tempus.expr import compile_expr

        return cls(compile_expr(text), text)

    def __str__(self) -> str:
        return self.label


def delta_derivative(f: Callable[[float], float], ts: TimeScale, t: float) -> float:
    r"""Evaluate :math:`f^\Delta(t)`.

    At right-scattered points this is the exact quotient
    ``(f(sigma(t)) - f(t)) / mu(t)``. At right-dense points the limit is
    approximated by a central difference when *t* has dense room on both
    sides (one-sided otherwise), with one Richardson extrapolation step.
    """
    t = ts.snap(t)
    sigma = ts.sigma(t)
    if sigma > t:
        return (f(sigma) - f(t)) / (sigma - t)

    room_left, room_right = ts.dense_room(t)
    if room_left == 0.0 and room_right == 0.0:
        raise BoundaryDerivative(f"no dense neighbourhood around {t}")

    h = DIFF_STEP * max(1.0, abs(t))
    if room_left >= h and room_right >= h:
        def diff(k: float) -> float:
            return (f(t + k) - f(t - k)) / (2.0 * k)

        return (4.0 * diff(h / 2) - diff(h)) / 3.0

    if room_right >= room_left:
        h = min(h, room_right)
        sign = 1.0
    else:
        h = min(h, room_left)
        sign = -1.0

    ft = f(t)

    def diff(k: float) -> float:
        return (f(t + sign * k) - ft) / (sign * k)

    return 2.0 * diff(h / 2) - diff(h)


def delta_integral(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    b: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    r"""Evaluate :math:`\int_a^b f(s) \Delta s`.

    Scattered points contribute ``mu(s) * f(s)``, dense pieces are integrated
    with :func:`~tempus.quadrature.integrate`.
    """
    total = 0.0
    for seg in ts.decompose(a, b):
        if isinstance(seg, Scattered):
            total += seg.mu * f(seg.s)
        else:
            total += integrate(f, seg.a, seg.b, config)

    return total


def repeated_integral(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    t: float,
    n: int,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> float:
    """Integrate *f* *n* times from *a*, nesting :func:`delta_integral` calls.

    Inner antiderivatives are recomputed for every outer node, so the cost
    grows geometrically with *n*.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")
    if ts.snap(t) < ts.snap(a):
        raise ReversedBounds(f"lower bound {a} exceeds upper bound {t}")

    if n == 1:
        return delta_integral(f, ts, a, t, config)

    def inner(tau: float) -> float:
        return repeated_integral(f, ts, a, tau, n - 1, config)

    return delta_integral(inner, ts, a, t, config)


def iterated_delta_derivative(
    f: Callable[[float], float], ts: TimeScale, t: float, n: int
) -> float:
    """Apply :func:`delta_derivative` *n* times.

    Each dense level adds a finite difference, so expect roughly ``1e-4``
    accuracy at ``n = 2`` on dense points; scattered levels are exact.
    """
    if n < 1 or int(n) != n:
        raise ValueError(f"n must be a positive integer, got {n}")

    if n == 1:
        return delta_derivative(f, ts, t)

    def lower(s: float) -> float:
        return iterated_delta_derivative(f, ts, s, n - 1)

    return delta_derivative(lower, ts, t)


def antiderivative(
    f: Callable[[float], float],
    ts: TimeScale,
    a: float,
    config: QuadratureConfig = DEFAULT_CONFIG,
) -> Callable[[float], float]:
    """Return ``F(t) = delta_integral(f, ts, a, t)`` as a callable."""

    def F(t: float) -> float:
        return delta_integral(f, ts, a, t, config)

    return F

