"""Coefficient arithmetic.

Coefficients are exact rationals (``fractions.Fraction``) on the fast path.
Anything else (``log 2``, ``sin(1/2)``, a free parameter ``x``) is a sympy
expression kept in expanded form so that cancellations are detected when
terms with equal exponents are merged.  Results that collapse back to a
rational are always returned as ``Fraction``.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Union

import mpmath
import sympy

Coeff = Union[Fraction, sympy.Expr]
Params = Mapping[str, Fraction]

ZERO = Fraction(0)
ONE = Fraction(1)

# constant sympy expressions whose value is below this are treated as zero
_NUMERIC_ZERO_DIGITS = 60
_NUMERIC_ZERO_EXP = -50


def _from_sympy(e: sympy.Basic) -> Coeff:
    if isinstance(e, sympy.Rational):
        return Fraction(int(e.p), int(e.q))
    return e


def _to_sympy(c: Coeff) -> sympy.Expr:
    if isinstance(c, Fraction):
        return sympy.Rational(c.numerator, c.denominator)
    return c


def as_coeff(value) -> Coeff:
    """Normalize ints, Fractions, decimal strings and sympy input."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        raise TypeError("floating coefficients are not exact; pass a Fraction or string")
    if isinstance(value, str):
        try:
            return Fraction(value)
        except ValueError:
            return _from_sympy(sympy.expand(sympy.sympify(value)))
    if isinstance(value, sympy.Basic):
        return _from_sympy(sympy.expand(value))
    raise TypeError(f"cannot use {value!r} as a coefficient")


def is_rational(c: Coeff) -> bool:
    return isinstance(c, Fraction)


def add(a: Coeff, b: Coeff) -> Coeff:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _from_sympy(_to_sympy(a) + _to_sympy(b))


def neg(a: Coeff) -> Coeff:
    if isinstance(a, Fraction):
        return -a
    return _from_sympy(-a)


def sub(a: Coeff, b: Coeff) -> Coeff:
    return add(a, neg(b))


def mul(a: Coeff, b: Coeff) -> Coeff:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    if isinstance(a, Fraction) or isinstance(b, Fraction):
        return _from_sympy(sympy.expand(_to_sympy(a) * _to_sympy(b)))
    return _from_sympy(sympy.expand(a * b))


def inv(a: Coeff) -> Coeff:
    if isinstance(a, Fraction):
        if a == 0:
            raise ZeroDivisionError("inverse of a zero coefficient")
        return 1 / a
    return _from_sympy(sympy.expand(1 / a))


def power(a: Coeff, p: Fraction) -> Coeff:
    """``a**p`` for rational ``p``; non-integer powers need ``a > 0``."""
    if p.denominator == 1:
        n = p.numerator
        if isinstance(a, Fraction):
            if n < 0 and a == 0:
                raise ZeroDivisionError("negative power of zero")
            return a**n
        return _from_sympy(sympy.expand(a**n))
    if isinstance(a, Fraction) and a.denominator == 1 and a.numerator == 1:
        return ONE
    return _from_sympy(sympy.expand(sympy.Pow(_to_sympy(a), sympy.Rational(p.numerator, p.denominator))))


def log(a: Coeff) -> Coeff:
    """Exact ``log a`` for a positive coefficient.

    Rational arguments are split over their prime factorization so that, for
    example, ``log 4 - 2 log 2`` cancels exactly.
    """
    if isinstance(a, Fraction):
        if a <= 0:
            raise ValueError("log of a non-positive coefficient")
        if a == 1:
            return ZERO
        total = sympy.Integer(0)
        for p, e in sympy.factorint(a.numerator).items():
            total += e * sympy.log(p)
        for p, e in sympy.factorint(a.denominator).items():
            total -= e * sympy.log(p)
        return _from_sympy(total)
    return _from_sympy(sympy.expand(sympy.expand_log(sympy.log(a), force=True)))


def free_params(c: Coeff) -> frozenset[str]:
    if isinstance(c, Fraction):
        return frozenset()
    return frozenset(s.name for s in c.free_symbols)


def substitute(c: Coeff, params: Params | None) -> Coeff:
    if isinstance(c, Fraction) or not params:
        return c
    subs = {sympy.Symbol(k): _to_sympy(Fraction(v)) for k, v in params.items()}
    return _from_sympy(sympy.expand(c.subs(subs)))


def is_zero(c: Coeff) -> bool:
    """Exact zero test.

    Closed transcendental constants that sympy cannot simplify are compared
    numerically at 60 digits, which only matters for identities such as
    ``sin(1)**2 + cos(1)**2 - 1``.
    """
    if isinstance(c, Fraction):
        return c == 0
    e = sympy.expand(c)
    if e == 0:
        return True
    if e.free_symbols:
        return False
    v = e.evalf(_NUMERIC_ZERO_DIGITS)
    return bool(abs(v) < sympy.Float(10) ** _NUMERIC_ZERO_EXP)


def sign(c: Coeff, params: Params | None = None) -> int | None:
    """Sign of ``c`` in {-1, 0, 1}; ``None`` if free parameters leave it open."""
    c = substitute(c, params)
    if isinstance(c, Fraction):
        return (c > 0) - (c < 0)
    if c.free_symbols:
        return None
    if is_zero(c):
        return 0
    v = c.evalf(_NUMERIC_ZERO_DIGITS)
    return 1 if v > 0 else -1


@lru_cache(maxsize=4096)
def _compiled(expr: sympy.Expr, names: tuple[str, ...]):
    syms = [sympy.Symbol(n) for n in names]
    return sympy.lambdify(syms, expr, modules="mpmath")


def to_mpf(c: Coeff, params: Params | None = None) -> mpmath.mpf:
    """Numeric value at the current mpmath precision."""
    if isinstance(c, Fraction):
        return mpmath.mpf(c.numerator) / c.denominator
    names = tuple(sorted(s.name for s in c.free_symbols))
    missing = [n for n in names if not params or n not in params]
    if missing:
        from .errors import SymbolicCoefficient

        raise SymbolicCoefficient(f"no value bound for parameter(s) {', '.join(missing)}")
    args = [mpmath.mpf(Fraction(params[n]).numerator) / Fraction(params[n]).denominator for n in names]
    return mpmath.mpf(_compiled(c, names)(*args))


def magnitude(c: Coeff, params: Params | None = None) -> float:
    """``|c|`` as a float, used only for cell-bound estimates."""
    if isinstance(c, Fraction):
        return abs(float(c))
    with mpmath.workdps(30):
        return float(abs(to_mpf(c, params)))


def fmt(c: Coeff) -> str:
    """Canonical string: ``p/q`` for rationals, sympy's ``str`` otherwise."""
    return str(c)


def parse(text: str) -> Coeff:
    return as_coeff(text)
