from __future__ import annotations

import pytest

from tempus.timescale import Integers, QScale, RealInterval, from_pieces, generate

# (name, scale, a, t) windows shared by the numerical tests
SCALES = {
    "Z": (generate(Integers(0, 5)), 0.0, 5.0),
    "R": (generate(RealInterval(0, 1)), 0.0, 1.0),
    "Q": (generate(QScale(0.5, 0, 6)), 0.5**6, 1.0),
    "mixed": (from_pieces([(0, 1), (2, 2), (3, 3)]), 0.0, 3.0),
}


@pytest.fixture(params=sorted(SCALES))
def window(request):
    return SCALES[request.param]


@pytest.fixture
def zwin():
    return generate(Integers(0, 5))


@pytest.fixture
def r02():
    return generate(RealInterval(0, 2))


@pytest.fixture
def mixed():
    return from_pieces([(0, 1), (2, 2), (3, 3)])
