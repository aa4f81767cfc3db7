"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class TempusError(Exception):
    """Base class for all errors raised by :mod:`tempus`."""


class ComputationError(TempusError):
    """An operator could not be evaluated on the given inputs."""


class EmptyScale(TempusError, ValueError):
    pass


class NonFinite(TempusError, ValueError):
    pass


class InvalidGenerator(TempusError, ValueError):
    pass


class NotInScale(ComputationError, ValueError):
    def __init__(self, t: float) -> None:
        super().__init__(f"{t!r} is not a point of the time scale")
        self.t = t


class ReversedBounds(ComputationError, ValueError):
    pass


class QuadratureFailure(ComputationError, ArithmeticError):
    pass


class BoundaryDerivative(ComputationError, ArithmeticError):
    pass


class NonPositiveArgument(ComputationError, ValueError):
    pass


class SingularTerm(ComputationError, ArithmeticError):
    """A kernel term ``0 ** (alpha - 1)`` with ``alpha < 1`` was hit under
    :attr:`~tempus.fractional.ZeroPowerPolicy.STRICT`."""


class ZeroPowerWarning(UserWarning):
    """Issued when a divergent kernel term was dropped by convention."""
