"""Direct numeric evaluation of expression trees.

This walks the tree with mpmath at the current working precision and never
looks at any series form, so it serves as the reference when checking
:func:`~loganalytic.normalize.prepare.prepare`.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping

import mpmath

from ..errors import DomainViolation, SymbolicCoefficient
from ..scale import as_mpf
from .ast import Add, Apply, Const, Div, Expr, Log, Mul, Param, Pow, Sub, Y
from .registry import RegisteredSeries, lookup


def _mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def eval_ast(
    e: Expr,
    y,
    params: Mapping[str, Fraction] | None = None,
    registry: Mapping[str, RegisteredSeries] | None = None,
) -> mpmath.mpf:
    y = as_mpf(y)
    params = params or {}

    def go(node: Expr) -> mpmath.mpf:
        if isinstance(node, Const):
            return _mpf(node.value)
        if isinstance(node, Y):
            return y
        if isinstance(node, Param):
            if node.name not in params:
                raise SymbolicCoefficient(f"no value bound for parameter {node.name}")
            return _mpf(Fraction(params[node.name]))
        if isinstance(node, Add):
            return go(node.left) + go(node.right)
        if isinstance(node, Sub):
            return go(node.left) - go(node.right)
        if isinstance(node, Mul):
            return go(node.left) * go(node.right)
        if isinstance(node, Div):
            den = go(node.right)
            if den == 0:
                raise DomainViolation("division by zero")
            return go(node.left) / den
        if isinstance(node, Pow):
            base = go(node.base)
            p = node.exponent
            if p.denominator == 1:
                if base == 0 and p < 0:
                    raise DomainViolation("negative power of zero")
                return base ** int(p)
            if base < 0:
                raise DomainViolation("fractional power of a negative number")
            return mpmath.power(base, _mpf(p))
        if isinstance(node, Log):
            arg = go(node.arg)
            if arg <= 0:
                raise DomainViolation("log of a non-positive number")
            return mpmath.log(arg)
        if isinstance(node, Apply):
            fn = lookup(node.name, registry)
            if len(node.args) != fn.arity:
                raise DomainViolation(f"{fn.name} takes {fn.arity} argument(s)")
            args = [go(a) for a in node.args]
            if not fn.contains(tuple(args)):
                raise DomainViolation(f"{fn.name} evaluated outside its convergence domain")
            return mpmath.mpf(fn.numeric(*args))
        raise TypeError(f"not an expression node: {node!r}")

    return go(e)
