"""Derivatives, limits, flatness, Taylor parts and smoothness of germs."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import sympy

from . import coeffs
from .coeffs import Coeff, Params
from .errors import BaseDiverges, SymbolicCoefficient, TruncationInsufficient, ZeroCoefficient
from .monomial import (
    NEG_INF,
    NO_LIMIT,
    POS_INF,
    ZERO_LIMIT,
    Limit,
    LimitKind,
    LogMonomial,
    dominates,
    mono_derivative,
    mono_limit,
)
from .scale import ExponentTuple, q_diff
from .series import GenSeries, PreparedForm, expansion_tail, unit_terms


@dataclass(frozen=True)
class TaylorSplit:
    """``f = sum_k d_k y^k + singular``.

    ``analytic_part`` lists only the nonzero ``d_k`` (use :meth:`d` for any
    ``k``); ``gamma1`` records the unit multi-indices that landed on an
    integer power of ``y``.
    """

    analytic_part: tuple[tuple[int, Coeff], ...]
    singular_part: GenSeries
    gamma1: tuple[tuple[int, ...], ...]
    degree: int

    def d(self, k: int) -> Coeff:
        for j, c in self.analytic_part:
            if j == k:
                return c
        return coeffs.ZERO


@dataclass(frozen=True)
class SmoothnessReport:
    """Germ-level regularity at ``0``.

    ``max_C_order`` is ``math.inf`` for analytic germs and ``-1`` when the
    germ has no finite limit (not even continuous at 0).
    """

    limit_at_0: Limit
    mu: ExponentTuple | None
    max_C_order: int | float
    analytic_at_0: bool


def _is_integer_power(q: ExponentTuple) -> bool:
    return q[0] >= 0 and q[0].denominator == 1 and not any(q[1:])


def series_derivative(f: GenSeries) -> GenSeries:
    """Termwise ``d/dy``; a remainder ``O(|Y|^b)`` becomes ``O(|Y|^q_diff(b))``."""
    out: dict[ExponentTuple, Coeff] = {}
    for m in f.terms:
        for d in mono_derivative(m):
            out[d.exp] = coeffs.add(out[d.exp], d.coeff) if d.exp in out else d.coeff
    tail = None
    if f.tail is not None:
        tail = ExponentTuple([-1] * (f.r + 1)) if f.tail.is_zero() else q_diff(f.tail)
    return GenSeries.build(out, f.cell, tail)


def nth_derivative(f: GenSeries, n: int) -> GenSeries:
    for _ in range(n):
        f = series_derivative(f)
    return f


def _signed_infinity(c: Coeff, params: Params | None) -> Limit:
    s = coeffs.sign(c, params)
    if s is None:
        return NO_LIMIT
    return POS_INF if s > 0 else NEG_INF


def _monomial_limit(c: Coeff, q: ExponentTuple, params: Params | None) -> Limit:
    kind = mono_limit(q).kind
    if kind is LimitKind.ZERO:
        return ZERO_LIMIT
    if kind is LimitKind.FINITE:
        c = coeffs.substitute(c, params)
        return ZERO_LIMIT if coeffs.is_zero(c) else Limit.finite(c)
    return _signed_infinity(c, params)


def _unit_value(p: PreparedForm, point: list[Coeff]) -> Coeff:
    unit = p.unit
    if unit.poly is not None:
        total = coeffs.ZERO
        for alpha, c in unit.poly.items():
            term = c
            for x, n in zip(point, alpha):
                if n:
                    term = coeffs.mul(term, coeffs.power(x, Fraction(n)))
            total = coeffs.add(total, term)
        return total
    subs = {t: coeffs._to_sympy(x) for t, x in zip(unit.symbols, point)}
    return coeffs.as_coeff(unit.function.subs(subs))


def limit_at_zero(p: PreparedForm, params: Params | None = None) -> Limit:
    """``lim_{y->0+}`` of ``a |Y|^q v(b_1 |Y|^p_1, ...)``."""
    point = []
    for b, bp in p.unit.bases:
        kind = mono_limit(bp).kind
        if kind is LimitKind.FINITE:
            point.append(b)
        elif kind is LimitKind.ZERO:
            point.append(coeffs.ZERO)
        else:
            raise BaseDiverges(f"base monomial {coeffs.fmt(b)}*|Y|^{bp} is unbounded near 0")
    if p.is_zero():
        return ZERO_LIMIT
    outer = _monomial_limit(p.a, p.q, params)
    if outer.kind is LimitKind.ZERO or outer.kind is LimitKind.NO_LIMIT:
        return outer
    v = _unit_value(p, point)
    if outer.kind is LimitKind.FINITE:
        value = coeffs.substitute(coeffs.mul(outer.value, v), params)
        return ZERO_LIMIT if coeffs.is_zero(value) else Limit.finite(value)
    # a special unit is positive, so the sign comes from the coefficient alone
    return outer


def series_limit(f: GenSeries, params: Params | None = None) -> Limit:
    """Limit of a generalized series, decided by its dominant term."""
    if params:
        f = f.substitute(params)
    if not f.terms:
        if f.tail is None or mono_limit(f.tail).kind is LimitKind.ZERO:
            return ZERO_LIMIT
        raise TruncationInsufficient(f"only a remainder O(|Y|^{f.tail}) is known; its limit is undetermined")
    lead = f.terms[0]
    return _monomial_limit(lead.coeff, lead.exp, params)


def flatness_bound(p: PreparedForm) -> int:
    """Smallest ``N >= 0`` such that ``|Y|^q / y^N`` is not ``o(1)``.

    A nonzero germ ``a |Y|^q u`` is then not ``N``-flat (not ``o(y^N)``),
    so ``N``-flatness at 0 forces the germ to vanish identically.
    """
    if p.is_zero():
        raise ZeroCoefficient("the zero germ is flat of every order")
    q = p.q
    n = max(0, math.floor(q[0]))
    while True:
        shifted = ExponentTuple([q[0] - n, *q[1:]])
        if mono_limit(shifted).kind is not LimitKind.ZERO:
            return n
        n += 1


#: how far beyond ``K`` taylor_split raises the unit degree before giving up
TAYLOR_EXTRA_DEGREE = 64


def taylor_split(p: PreparedForm, K: int) -> TaylorSplit:
    """Split the expansion of ``p`` into ``sum_{k<=K} d_k y^k`` and singular terms."""
    if p.is_zero():
        return TaylorSplit((), GenSeries.zero(p.cell), (), K)
    r = p.cell.r
    horizon = ExponentTuple.unit(r, 0, K)
    degree = K
    while True:
        tail = expansion_tail(p, degree)
        if tail is None or dominates(horizon, tail):
            break
        from_remainder = p.unit.remainder is not None and tail == p.q + p.unit.remainder
        if from_remainder or degree >= K + TAYLOR_EXTRA_DEGREE:
            raise TruncationInsufficient(
                f"remainder O(|Y|^{tail}) can hide further terms y^k with k <= {K}"
            )
        degree += 1
    d: dict[int, Coeff] = {}
    gamma1 = []
    singular: dict[ExponentTuple, Coeff] = {}
    for alpha, c, q in unit_terms(p, degree):
        if tail is not None and not dominates(q, tail):
            continue
        if _is_integer_power(q):
            k = int(q[0])
            if k > K:
                singular[q] = coeffs.add(singular[q], c) if q in singular else c
                continue
            gamma1.append(alpha)
            d[k] = coeffs.add(d[k], c) if k in d else c
        else:
            singular[q] = coeffs.add(singular[q], c) if q in singular else c
    # integer powers above K are kept with the singular data only as remainder
    analytic = tuple(sorted((k, c) for k, c in d.items() if not coeffs.is_zero(c)))
    over = [q for q in singular if _is_integer_power(q)]
    sing_tail = tail
    if over:
        sing_tail = max([tail] * (tail is not None) + over, key=ExponentTuple.dominance_key)
        for q in over:
            del singular[q]
    return TaylorSplit(analytic, GenSeries.build(singular, p.cell, sing_tail), tuple(gamma1), K)


def split_series(f: GenSeries) -> tuple[GenSeries, GenSeries]:
    """``(integer-power part, singular part)`` of a series; the remainder stays singular."""
    analytic = [(m.coeff, m.exp) for m in f.terms if _is_integer_power(m.exp)]
    singular = [(m.coeff, m.exp) for m in f.terms if not _is_integer_power(m.exp)]
    return GenSeries.build(analytic, f.cell), GenSeries.build(singular, f.cell, f.tail)


def classify(f: GenSeries, params: Params | None = None) -> SmoothnessReport:
    """Analyticity and the largest ``M`` with ``f`` of class ``C^M`` at 0.

    ``M`` is found by differentiating the singular terms until their limit
    stops being finite.  Remainders are ignored: the answer is exact for the
    terms kept by the truncation.
    """
    if params:
        f = f.substitute(params)
    limit = series_limit(f)
    _, singular = split_series(f)
    sing = GenSeries.build(singular.items(), f.cell)
    if not sing.terms:
        return SmoothnessReport(limit, None, math.inf, True)
    mu = sing.terms[0].exp
    bound = max(0, math.ceil(mu[0])) + 2
    order = -1
    g = sing
    for k in range(bound + 1):
        if not g.terms or series_limit(g).is_bounded():
            order = k
            g = series_derivative(g)
        else:
            break
    return SmoothnessReport(limit, mu, order, False)


def germ_equal_zero(f: GenSeries, params: Params | None = None) -> bool:
    """Whether the germ vanishes identically (up to its remainder)."""
    if params:
        f = f.substitute(params)
    for m in f.terms:
        if coeffs.free_params(m.coeff):
            raise SymbolicCoefficient(
                f"coefficient {coeffs.fmt(m.coeff)} depends on unbound parameters"
            )
    return not f.terms


def leading_monomial(f: GenSeries) -> LogMonomial | None:
    return f.terms[0] if f.terms else None


__all__ = [
    "SmoothnessReport",
    "TaylorSplit",
    "classify",
    "flatness_bound",
    "germ_equal_zero",
    "limit_at_zero",
    "nth_derivative",
    "series_derivative",
    "series_limit",
    "split_series",
    "taylor_split",
]
