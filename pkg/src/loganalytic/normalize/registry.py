"""Registered convergent power series usable as ``name(args)`` in expressions.

Each entry is an analytic function on an open polydisc around 0, given both
as a sympy expression (for exact Taylor coefficients at any center inside the
polydisc) and as an mpmath callable (for the numeric oracle).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import mpmath
import sympy

from ..errors import UnknownFunction

_Z = sympy.Symbol("z")
_U = sympy.Symbol("u")
_V = sympy.Symbol("v")


@dataclass(frozen=True)
class RegisteredSeries:
    name: str
    variables: tuple[sympy.Symbol, ...]
    expr: sympy.Expr
    radius: Fraction
    numeric: Callable[..., mpmath.mpf]
    description: str = ""

    @property
    def arity(self) -> int:
        return len(self.variables)

    def contains(self, center: tuple[float, ...]) -> bool:
        """Whether a point lies strictly inside the convergence polydisc."""
        return all(abs(c) < float(self.radius) for c in center)

    def local_radius(self, center: tuple[float, ...]) -> float:
        """Distance from ``center`` to the polydisc boundary (sup norm)."""
        return float(min(float(self.radius) - abs(c) for c in center))


def _entry(name, variables, expr, radius, numeric, description):
    return RegisteredSeries(name, tuple(variables), expr, Fraction(radius), numeric, description)


DEFAULT_REGISTRY: Mapping[str, RegisteredSeries] = {
    e.name: e
    for e in [
        _entry("geom", [_Z], 1 / (1 - _Z), 1, lambda z: 1 / (1 - z), "1/(1-z)"),
        _entry("log1p", [_Z], sympy.log(1 + _Z), 1, mpmath.log1p, "log(1+z)"),
        _entry("sqrt1p", [_Z], sympy.sqrt(1 + _Z), 1, lambda z: mpmath.sqrt(1 + z), "sqrt(1+z)"),
        _entry("atan", [_Z], sympy.atan(_Z), 1, mpmath.atan, "arctan z"),
        _entry("sin", [_Z], sympy.sin(_Z), 1, mpmath.sin, "sin z, restricted to |z| < 1"),
        _entry("cos", [_Z], sympy.cos(_Z), 1, mpmath.cos, "cos z, restricted to |z| < 1"),
        _entry("exp", [_Z], sympy.exp(_Z), 1, mpmath.exp, "exp z, restricted to |z| < 1"),
        _entry(
            "bigeom",
            [_U, _V],
            1 / ((1 - _U) * (1 - _V)),
            1,
            lambda u, v: 1 / ((1 - u) * (1 - v)),
            "1/((1-u)(1-v))",
        ),
    ]
}


def lookup(name: str, registry: Mapping[str, RegisteredSeries] | None = None) -> RegisteredSeries:
    table = DEFAULT_REGISTRY if registry is None else registry
    try:
        return table[name]
    except KeyError:
        raise UnknownFunction(f"no registered series named {name!r}") from None
