"""Exception hierarchy.

Every error carries a stable machine-readable ``name`` (used in CLI reports)
that defaults to the class name.
"""

from __future__ import annotations


class LogAnalyticError(Exception):
    """Base class for all errors raised by the package."""

    @property
    def name(self) -> str:
        return type(self).__name__


# scale / monomial


class DomainViolation(LogAnalyticError, ValueError):
    pass


class PrecisionOverflow(LogAnalyticError, OverflowError):
    pass


class ZeroTuple(LogAnalyticError, ValueError):
    pass


class LengthMismatch(LogAnalyticError, ValueError):
    pass


# series


class CellMismatch(LogAnalyticError, ValueError):
    pass


class InvalidUnit(LogAnalyticError, ValueError):
    """A special unit failed its range or positivity check."""


class NonVanishingBases(LogAnalyticError, ValueError):
    pass


class NoDominantTerm(LogAnalyticError, ValueError):
    pass


class SymbolicCoefficient(LogAnalyticError, ValueError):
    pass


# calculus


class BaseDiverges(LogAnalyticError, ValueError):
    pass


class ZeroCoefficient(LogAnalyticError, ValueError):
    pass


class TruncationInsufficient(LogAnalyticError, ValueError):
    pass


# normalize


class ParseError(LogAnalyticError, ValueError):
    """Malformed expression text; ``pos`` is the 0-based character offset."""

    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos

    @property
    def name(self) -> str:
        return "SyntaxError"


class PreparationError(LogAnalyticError):
    pass


class CenterRequired(PreparationError, NoDominantTerm):
    """The germ's leading coefficient may vanish for some parameter value.

    Preparing it further would need a nonzero center, which the constructive
    fragment does not provide.
    """


class LogOfVanishing(PreparationError, ValueError):
    pass


class NonPositive(PreparationError, ValueError):
    pass


class OrderExceeded(PreparationError, ValueError):
    pass


class RawYDependence(PreparationError, ValueError):
    pass


class CompositionDomain(PreparationError, ValueError):
    """A registered series was applied outside its convergence domain."""


class UnknownFunction(PreparationError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""
