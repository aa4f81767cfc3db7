"""Time scales as finite unions of disjoint closed intervals.

A :class:`TimeScale` is stored as an ordered tuple of ``(left, right)`` pairs.
A pair with ``left == right`` is an isolated point. Every query point is first
snapped onto the scale with a relative tolerance so that quadrature nodes and
other floating point products land back on the set.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from tempus.errors import (
    EmptyScale,
    InvalidGenerator,
    NonFinite,
    NotInScale,
    ReversedBounds,
)

SNAP_RTOL = 1.0e-12


def snap_tol(t: float) -> float:
    return SNAP_RTOL * max(1.0, abs(t))


# {{{ segments


@dataclass(frozen=True)
class Continuous:
    """A dense sub-interval ``[a, b]`` of the scale with ``a < b``."""

    a: float
    b: float

    @property
    def measure(self) -> float:
        return self.b - self.a


@dataclass(frozen=True)
class Scattered:
    """A right-scattered point *s* with graininess *mu*."""

    s: float
    mu: float

    @property
    def sigma(self) -> float:
        return self.s + self.mu

    @property
    def measure(self) -> float:
        return self.mu


Segment = Union[Continuous, Scattered]

# }}}


# {{{ point classification


class Side(enum.Enum):
    DENSE = "dense"
    SCATTERED = "scattered"


@dataclass(frozen=True)
class PointClass:
    right: Side
    left: Side
    is_max: bool = False
    is_min: bool = False

    @property
    def right_scattered(self) -> bool:
        return self.right is Side.SCATTERED

    @property
    def left_scattered(self) -> bool:
        return self.left is Side.SCATTERED

    @property
    def isolated(self) -> bool:
        return self.right_scattered and self.left_scattered

    @property
    def dense(self) -> bool:
        return not (self.right_scattered or self.left_scattered)

    def __str__(self) -> str:
        if self.isolated:
            name = "isolated"
        elif self.dense:
            name = "dense"
        else:
            name = f"left-{self.left.value}, right-{self.right.value}"
        flags = [n for n, v in (("min", self.is_min), ("max", self.is_max)) if v]
        return f"{name} ({', '.join(flags)})" if flags else name

# }}}


# {{{ time scale


@dataclass(frozen=True)
class TimeScale:
    """A nonempty compact subset of the real line.

    Use :func:`from_pieces` or :func:`generate` instead of calling the
    constructor directly; the constructor only validates canonical input.
    """

    pieces: tuple[tuple[float, float], ...]
    _lefts: tuple[float, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        if not self.pieces:
            raise EmptyScale("a time scale needs at least one piece")
        prev = -math.inf
        for left, right in self.pieces:
            if not (math.isfinite(left) and math.isfinite(right)):
                raise NonFinite(f"non-finite endpoint in ({left}, {right})")
            if left > right:
                raise ValueError(f"reversed piece ({left}, {right})")
            if left <= prev:
                raise ValueError("pieces must be sorted and separated by gaps")
            prev = right
        object.__setattr__(self, "_lefts", tuple(p[0] for p in self.pieces))

    # {{{ basic queries

    @property
    def min(self) -> float:
        return self.pieces[0][0]

    @property
    def max(self) -> float:
        return self.pieces[-1][1]

    @property
    def is_discrete(self) -> bool:
        return all(left == right for left, right in self.pieces)

    def points(self) -> list[float]:
        """Isolated points and interval endpoints, in increasing order."""
        out: list[float] = []
        for left, right in self.pieces:
            out.append(left)
            if right > left:
                out.append(right)
        return out

    def _locate(self, t: float) -> tuple[int, float]:
        """Return the index of the piece containing *t* and the snapped value."""
        if not math.isfinite(t):
            raise NotInScale(t)

        eps = snap_tol(t)
        i = bisect.bisect_right(self._lefts, t + eps) - 1
        if i < 0:
            raise NotInScale(t)

        left, right = self.pieces[i]
        if t > right + eps:
            raise NotInScale(t)
        if abs(t - left) <= eps:
            return i, left
        if abs(t - right) <= eps:
            return i, right
        return i, t

    def __contains__(self, t: object) -> bool:
        try:
            self._locate(float(t))  # type: ignore[arg-type]
        except (NotInScale, TypeError, ValueError):
            return False
        return True

    def snap(self, t: float) -> float:
        """Map *t* onto the scale, raising :class:`NotInScale` if too far."""
        return self._locate(t)[1]

    # }}}

    # {{{ jump operators

    def sigma(self, t: float) -> float:
        """Forward jump operator; ``sigma(max) == max``."""
        i, t = self._locate(t)
        if t == self.pieces[i][1] and i + 1 < len(self.pieces):
            return self.pieces[i + 1][0]
        return t

    def rho(self, t: float) -> float:
        """Backward jump operator; ``rho(min) == min``."""
        i, t = self._locate(t)
        if t == self.pieces[i][0] and i > 0:
            return self.pieces[i - 1][1]
        return t

    def mu(self, t: float) -> float:
        """Graininess ``sigma(t) - t``."""
        _, ts = self._locate(t)
        return self.sigma(ts) - ts

    graininess = mu

    def classify(self, t: float) -> PointClass:
        i, t = self._locate(t)
        left, right = self.pieces[i]
        is_max = i == len(self.pieces) - 1 and t == right
        is_min = i == 0 and t == left

        # sigma(max) == max and rho(min) == min, so the extremes count as dense
        right_scattered = t == right and not is_max
        left_scattered = t == left and not is_min
        return PointClass(
            right=Side.SCATTERED if right_scattered else Side.DENSE,
            left=Side.SCATTERED if left_scattered else Side.DENSE,
            is_max=is_max,
            is_min=is_min,
        )

    def dense_room(self, t: float) -> tuple[float, float]:
        """Length of the dense neighbourhood of *t* to the left and right."""
        i, t = self._locate(t)
        left, right = self.pieces[i]
        return t - left, right - t

    # }}}

    # {{{ windows

    def decompose(self, a: float, b: float) -> list[Segment]:
        """Split ``[a, b) ∩ T`` into dense intervals and right-scattered points."""
        ia, a = self._locate(a)
        ib, b = self._locate(b)
        if a > b:
            raise ReversedBounds(f"lower bound {a} exceeds upper bound {b}")

        segments: list[Segment] = []
        for i in range(ia, ib + 1):
            left, right = self.pieces[i]
            c, d = max(left, a), min(right, b)
            if d > c:
                segments.append(Continuous(c, d))
            if d < b:
                segments.append(Scattered(right, self.pieces[i + 1][0] - right))

        return segments

    def restrict(self, a: float | None = None, b: float | None = None) -> TimeScale:
        """Return ``[a, b] ∩ T`` as a new time scale."""
        lo = self.min if a is None else self.snap(a)
        hi = self.max if b is None else self.snap(b)
        if lo > hi:
            raise ReversedBounds(f"lower bound {lo} exceeds upper bound {hi}")

        pieces = [
            (max(left, lo), min(right, hi))
            for left, right in self.pieces
            if right >= lo and left <= hi
        ]
        return TimeScale(tuple(pieces))

    # }}}

    def to_json(self) -> dict[str, list[list[float]]]:
        return {"pieces": [[left, right] for left, right in self.pieces]}

    def __str__(self) -> str:
        parts = [
            f"{{{left:g}}}" if left == right else f"[{left:g}, {right:g}]"
            for left, right in self.pieces
        ]
        return " ∪ ".join(parts)


def from_pieces(pieces: Iterable[Sequence[float]]) -> TimeScale:
    """Build a canonical :class:`TimeScale` from arbitrary closed intervals.

    Pieces are sorted, and overlapping or touching pieces are merged.

    >>> from_pieces([(1, 2), (0, 1)]).pieces
    ((0.0, 2.0),)
    """
    items = []
    for piece in pieces:
        left, right = (float(x) for x in piece)
        if not (math.isfinite(left) and math.isfinite(right)):
            raise NonFinite(f"non-finite endpoint in ({left}, {right})")
        if left > right:
            raise ValueError(f"reversed piece ({left}, {right})")
        items.append((left, right))

    if not items:
        raise EmptyScale("a time scale needs at least one piece")

    items.sort()
    merged = [items[0]]
    for left, right in items[1:]:
        mleft, mright = merged[-1]
        if left <= mright:
            merged[-1] = (mleft, max(mright, right))
        else:
            merged.append((left, right))

    return TimeScale(tuple(merged))

# }}}


# {{{ generators


@dataclass(frozen=True)
class Integers:
    """The integer window ``{a, a + 1, ..., b}``."""

    a: int
    b: int


@dataclass(frozen=True)
class RealInterval:
    """The closed interval ``[a, b]`` with ``a < b``."""

    a: float
    b: float


@dataclass(frozen=True)
class QScale:
    """The quantum window ``{q^k : kmin <= k <= kmax}`` with ``0 < q < 1``."""

    q: float
    kmin: int
    kmax: int


@dataclass(frozen=True)
class UnionOf:
    parts: tuple[GeneratorSpec, ...]

    def __init__(self, *parts: GeneratorSpec) -> None:
        object.__setattr__(self, "parts", tuple(parts))


GeneratorSpec = Union[Integers, RealInterval, QScale, UnionOf]


def _generate_pieces(spec: GeneratorSpec) -> list[tuple[float, float]]:
    match spec:
        case Integers(a, b):
            if int(a) != a or int(b) != b or a > b:
                raise InvalidGenerator(f"integers({a}, {b}) needs integers a <= b")
            return [(float(k), float(k)) for k in range(int(a), int(b) + 1)]
        case RealInterval(a, b):
            if not a < b:
                raise InvalidGenerator(f"real_interval({a}, {b}) needs a < b")
            return [(float(a), float(b))]
        case QScale(q, kmin, kmax):
            if not 0.0 < q < 1.0:
                raise InvalidGenerator(f"q_scale needs 0 < q < 1, got {q}")
            if int(kmin) != kmin or int(kmax) != kmax or kmin > kmax:
                raise InvalidGenerator(f"q_scale needs integers kmin <= kmax")
            return [(q**k, q**k) for k in range(int(kmin), int(kmax) + 1)]
        case UnionOf(parts):
            if not parts:
                raise InvalidGenerator("union of nothing")
            return [p for part in parts for p in _generate_pieces(part)]
        case _:
            raise InvalidGenerator(f"unknown generator: {spec!r}")


def generate(spec: GeneratorSpec) -> TimeScale:
    """Build the time scale described by a generator.

    >>> str(generate(UnionOf(RealInterval(0, 1), Integers(2, 4))))
    '[0, 1] ∪ {2} ∪ {3} ∪ {4}'
    """
    return from_pieces(_generate_pieces(spec))

# }}}
