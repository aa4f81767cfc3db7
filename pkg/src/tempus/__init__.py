"""Delta calculus and Riemann-Liouville fractional operators on time scales."""

from tempus.delta import (
    ScaleFunction,
    delta_derivative,
    delta_integral,
    iterated_delta_derivative,
    repeated_integral,
)
from tempus.fractional import (
    FracOrder,
    KernelVariant,
    ZeroPowerPolicy,
    binomial_expanded_g,
    caputo_derivative,
    frac_integral,
    gamma,
    rl_derivative,
)
from tempus.quadrature import QuadratureConfig
from tempus.timescale import (
    Continuous,
    Integers,
    PointClass,
    QScale,
    RealInterval,
    Scattered,
    TimeScale,
    UnionOf,
    from_pieces,
    generate,
)

__all__ = [
    "Continuous",
    "FracOrder",
    "Integers",
    "KernelVariant",
    "PointClass",
    "QScale",
    "QuadratureConfig",
    "RealInterval",
    "ScaleFunction",
    "Scattered",
    "TimeScale",
    "UnionOf",
    "ZeroPowerPolicy",
    "binomial_expanded_g",
    "caputo_derivative",
    "delta_derivative",
    "delta_integral",
    "frac_integral",
    "from_pieces",
    "gamma",
    "generate",
    "iterated_delta_derivative",
    "repeated_integral",
    "rl_derivative",
]
