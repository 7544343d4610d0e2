"""Generalized log-power series, special units and prepared forms.

A :class:`GenSeries` is a finite sum of log-monomials on one simple cell plus
an optional remainder ``O(|Y|^beta)``.  It is kept canonical: exponents are
pairwise distinct, sorted from the dominant term down, no zero coefficients,
and every term strictly dominates the remainder exponent.
"""

from __future__ import annotations

from dataclasses import InitVar, dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence

import mpmath
import sympy

from . import coeffs
from .coeffs import Coeff, Params
from .errors import (
    BaseDiverges,
    CellMismatch,
    CenterRequired,
    InvalidUnit,
    NoDominantTerm,
    NonVanishingBases,
)
from .monomial import LogMonomial, dominates, max_dominant, shrink_for_bound, sup_abs, tends_to_zero
from .scale import ExponentTuple, SimpleCell

#: default total degree for unit expansions
DEFAULT_TRUNC = 12


def _key(q: ExponentTuple):
    return q.dominance_key()


def _max_tail(*tails: ExponentTuple | None) -> ExponentTuple | None:
    present = [t for t in tails if t is not None]
    return max(present, key=_key) if present else None


@dataclass(frozen=True)
class GenSeries:
    terms: tuple[LogMonomial, ...]
    tail: ExponentTuple | None
    cell: SimpleCell

    @classmethod
    def build(
        cls,
        items: Mapping[ExponentTuple, Coeff] | Iterable[tuple[Coeff, ExponentTuple]],
        cell: SimpleCell,
        tail: ExponentTuple | None = None,
    ) -> "GenSeries":
        """Canonicalize raw ``(coeff, exponent)`` data into a series."""
        if isinstance(items, Mapping):
            merged = dict(items)
        else:
            merged: dict[ExponentTuple, Coeff] = {}
            for c, q in items:
                q = q if isinstance(q, ExponentTuple) else ExponentTuple(q)
                c = coeffs.as_coeff(c)
                merged[q] = coeffs.add(merged[q], c) if q in merged else c
        width = cell.r + 1
        if tail is not None and len(tail) != width:
            raise CellMismatch("tail exponent does not match the cell order")
        kept = []
        for q, c in merged.items():
            if len(q) != width:
                raise CellMismatch(f"exponent {q} does not match an order-{cell.r} cell")
            if tail is not None and not dominates(q, tail):
                continue
            if coeffs.is_zero(c):
                continue
            kept.append((q, c))
        kept.sort(key=lambda qc: _key(qc[0]), reverse=True)
        terms = tuple(LogMonomial(c, q, cell) for q, c in kept)
        return cls(terms, tail, cell)

    @classmethod
    def zero(cls, cell: SimpleCell) -> "GenSeries":
        return cls((), None, cell)

    @classmethod
    def constant(cls, c, cell: SimpleCell) -> "GenSeries":
        return cls.build([(coeffs.as_coeff(c), ExponentTuple.zero(cell.r))], cell)

    @classmethod
    def monomial(cls, c, q, cell: SimpleCell) -> "GenSeries":
        return cls.build([(coeffs.as_coeff(c), q)], cell)

    @classmethod
    def variable(cls, cell: SimpleCell) -> "GenSeries":
        """The germ ``y`` itself."""
        return cls.monomial(1, ExponentTuple.unit(cell.r, 0), cell)

    # -- views -----------------------------------------------------------------

    @property
    def r(self) -> int:
        return self.cell.r

    def items(self) -> list[tuple[Coeff, ExponentTuple]]:
        return [(m.coeff, m.exp) for m in self.terms]

    def as_dict(self) -> dict[ExponentTuple, Coeff]:
        return {m.exp: m.coeff for m in self.terms}

    def is_exact_zero(self) -> bool:
        return not self.terms and self.tail is None

    def lead(self) -> ExponentTuple | None:
        """Dominant exponent, falling back to the remainder exponent."""
        if self.terms:
            return self.terms[0].exp
        return self.tail

    def coefficient(self, q) -> Coeff:
        q = q if isinstance(q, ExponentTuple) else ExponentTuple(q)
        return self.as_dict().get(q, coeffs.ZERO)

    def constant_term(self) -> Coeff:
        return self.coefficient(ExponentTuple.zero(self.r))

    def free_params(self) -> frozenset[str]:
        out = frozenset()
        for m in self.terms:
            out |= coeffs.free_params(m.coeff)
        return out

    # -- reshaping ---------------------------------------------------------------

    def truncate(self, beta: ExponentTuple) -> "GenSeries":
        """Absorb everything not dominating ``beta`` into the remainder."""
        return GenSeries.build(self.as_dict(), self.cell, _max_tail(self.tail, beta))

    def restrict(self, cell: SimpleCell) -> "GenSeries":
        """The same germ on a smaller cell of the same order."""
        if cell.r != self.r:
            raise CellMismatch("restriction must keep the scale order")
        if self.cell.upper is not None and (cell.upper is None or cell.upper > self.cell.upper):
            raise CellMismatch("restriction must not enlarge the cell")
        return GenSeries(tuple(LogMonomial(m.coeff, m.exp, cell) for m in self.terms), self.tail, cell)

    def substitute(self, params: Params) -> "GenSeries":
        return GenSeries.build(
            [(coeffs.substitute(c, params), q) for c, q in self.items()], self.cell, self.tail
        )

    def map_coeffs(self, fn: Callable[[Coeff], Coeff]) -> "GenSeries":
        return GenSeries.build([(fn(c), q) for c, q in self.items()], self.cell, self.tail)

    # -- arithmetic ----------------------------------------------------------------

    def __add__(self, other):
        if not isinstance(other, GenSeries):
            other = GenSeries.constant(other, self.cell)
        return series_add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "GenSeries":
        return GenSeries(
            tuple(LogMonomial(coeffs.neg(m.coeff), m.exp, self.cell) for m in self.terms), self.tail, self.cell
        )

    def __sub__(self, other):
        if not isinstance(other, GenSeries):
            other = GenSeries.constant(other, self.cell)
        return series_add(self, -other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, GenSeries):
            return series_mul(self, other)
        return self.scale(coeffs.as_coeff(other))

    __rmul__ = __mul__

    def scale(self, c: Coeff) -> "GenSeries":
        if coeffs.is_zero(c):
            return GenSeries.zero(self.cell)
        return GenSeries.build([(coeffs.mul(c, m.coeff), m.exp) for m in self.terms], self.cell, self.tail)

    def shift(self, q: ExponentTuple) -> "GenSeries":
        """Multiply by ``|Y|^q``."""
        tail = None if self.tail is None else self.tail + q
        return GenSeries.build([(m.coeff, m.exp + q) for m in self.terms], self.cell, tail)

    def __pow__(self, n: int) -> "GenSeries":
        if not isinstance(n, int) or n < 0:
            raise ValueError("use series_power for negative or fractional exponents")
        result = GenSeries.constant(1, self.cell)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __str__(self) -> str:
        return format_series(self)


def _check_cells(f: GenSeries, g: GenSeries):
    if f.cell != g.cell:
        raise CellMismatch(f"series live on different cells: {f.cell} vs {g.cell}")


def series_add(f: GenSeries, g: GenSeries) -> GenSeries:
    _check_cells(f, g)
    merged = f.as_dict()
    for m in g.terms:
        merged[m.exp] = coeffs.add(merged[m.exp], m.coeff) if m.exp in merged else m.coeff
    return GenSeries.build(merged, f.cell, _max_tail(f.tail, g.tail))


def series_mul(f: GenSeries, g: GenSeries, tail_at_most: ExponentTuple | None = None) -> GenSeries:
    """Product; ``tail_at_most`` optionally truncates further while multiplying."""
    _check_cells(f, g)
    if f.is_exact_zero() or g.is_exact_zero():
        return GenSeries.zero(f.cell)
    candidates = [tail_at_most]
    if g.tail is not None:
        candidates.append(f.lead() + g.tail)
    if f.tail is not None:
        candidates.append(g.lead() + f.tail)
    tail = _max_tail(*candidates)
    out: dict[ExponentTuple, Coeff] = {}
    for mf in f.terms:
        for mg in g.terms:
            q = mf.exp + mg.exp
            if tail is not None and not dominates(q, tail):
                continue
            c = coeffs.mul(mf.coeff, mg.coeff)
            out[q] = coeffs.add(out[q], c) if q in out else c
    return GenSeries.build(out, f.cell, tail)


def lift_order(f: GenSeries, r: int) -> GenSeries:
    """View ``f`` at a higher scale order (padding exponents with zeros)."""
    if r == f.r:
        return f
    if r < f.r:
        raise ValueError("lift_order only raises the order")
    default = SimpleCell.default(r)
    upper = f.cell.upper
    if upper is None or upper > default.upper:
        upper = default.upper
    cell = SimpleCell(r, upper)
    tail = None if f.tail is None else f.tail.padded(r)
    return GenSeries.build([(c, q.padded(r)) for c, q in f.items()], cell, tail)


# -- composition ------------------------------------------------------------------


def split_dominant(f: GenSeries, params: Params | None = None) -> tuple[Coeff, ExponentTuple, GenSeries]:
    """Write ``f = a |Y|^q (1 + t)`` with ``t -> 0``.

    Raises :class:`CenterRequired` when the leading coefficient depends on a
    free parameter (it could vanish for some value).
    """
    if params:
        f = f.substitute(params)
    if not f.terms:
        raise NoDominantTerm("series has no terms" + ("" if f.tail is None else " above its remainder"))
    a, q = f.terms[0].coeff, f.terms[0].exp
    if coeffs.free_params(a):
        raise CenterRequired(f"leading coefficient {coeffs.fmt(a)} may vanish for some parameter value")
    a_inv = coeffs.inv(a)
    rest = [(coeffs.mul(c, a_inv), e - q) for c, e in f.items()[1:]]
    tail = None if f.tail is None else f.tail - q
    return a, q, GenSeries.build(rest, f.cell, tail)


def check_vanishing(args: Sequence[GenSeries]) -> None:
    for t in args:
        lead = t.lead()
        if lead is not None and not tends_to_zero(lead):
            raise ValueError(f"expansion variable with lead exponent {lead} does not tend to 0")


def compose(
    coefficients: Mapping[tuple[int, ...], Coeff],
    args: Sequence[GenSeries],
    K: int,
    exact: bool = False,
) -> GenSeries:
    """``sum_{|alpha| <= K} c_alpha prod t_i^alpha_i`` for germs ``t_i -> 0``.

    Unless ``exact`` (the coefficient table is the whole power series), the
    omitted degrees contribute ``O(|Y|^{(K+1) lead})`` with ``lead`` the
    slowest-decaying argument.
    """
    if not args:
        raise ValueError("compose needs at least one argument")
    cell = args[0].cell
    for t in args:
        _check_cells(args[0], t)
    check_vanishing(args)
    leads = [t.lead() for t in args if t.lead() is not None]
    tail = None
    if not exact and leads:
        tail = max_dominant(leads) * (K + 1)
    powers: list[list[GenSeries]] = [[GenSeries.constant(1, cell)] for _ in args]

    def power_of(i: int, n: int) -> GenSeries:
        cache = powers[i]
        while len(cache) <= n:
            cache.append(series_mul(cache[-1], args[i], tail))
        return cache[n]

    total: dict[ExponentTuple, Coeff] = {}
    tails = [tail]
    for alpha, c in coefficients.items():
        if sum(alpha) > K or coeffs.is_zero(c):
            continue
        term = GenSeries.constant(c, cell)
        for i, n in enumerate(alpha):
            if n:
                term = series_mul(term, power_of(i, n), tail)
        tails.append(term.tail)
        for m in term.terms:
            total[m.exp] = coeffs.add(total[m.exp], m.coeff) if m.exp in total else m.coeff
    return GenSeries.build(total, cell, _max_tail(*tails))


_T = sympy.Symbol("t")


@lru_cache(maxsize=512)
def taylor_coefficients(
    expr: sympy.Expr, variables: tuple[sympy.Symbol, ...], center: tuple, K: int
) -> dict[tuple[int, ...], Coeff]:
    """Taylor coefficients ``d^alpha expr(center) / alpha!`` for ``|alpha| <= K``."""
    point = dict(zip(variables, center))
    out: dict[tuple[int, ...], Coeff] = {}
    derivs: dict[tuple[int, ...], sympy.Expr] = {(0,) * len(variables): expr}
    for degree in range(K + 1):
        for alpha in _multi_indices(len(variables), degree):
            if alpha not in derivs:
                i = next(k for k, a in enumerate(alpha) if a)
                prev = alpha[:i] + (alpha[i] - 1,) + alpha[i + 1 :]
                derivs[alpha] = sympy.diff(derivs[prev], variables[i])
            value = derivs[alpha].subs(point)
            fact = 1
            for a in alpha:
                fact *= sympy.factorial(a)
            out[alpha] = coeffs.as_coeff(sympy.nsimplify(value / fact) if value.is_Float else value / fact)
    return out


def _multi_indices(s: int, degree: int):
    if s == 0:
        if degree == 0:
            yield ()
        return
    if s == 1:
        yield (degree,)
        return
    for first in range(degree, -1, -1):
        for rest in _multi_indices(s - 1, degree - first):
            yield (first,) + rest


def univariate(expr: sympy.Expr, K: int, center=0) -> dict[tuple[int, ...], Coeff]:
    """Coefficients of a one-variable function in ``t`` around ``center``."""
    return taylor_coefficients(expr, (_T,), (sympy.sympify(center),), K)


def series_reciprocal(g: GenSeries, K: int = DEFAULT_TRUNC, params: Params | None = None) -> GenSeries:
    """``1/g`` through ``a^-1 |Y|^-q (1 + t)^-1``."""
    a, q, t = split_dominant(g, params)
    inner = GenSeries.constant(1, g.cell)
    if t.terms or t.tail is not None:
        inner = compose(univariate(1 / (1 + _T), K), [t], K)
    return inner.shift(-q).scale(coeffs.inv(a))


def series_power(g: GenSeries, p, K: int = DEFAULT_TRUNC, params: Params | None = None) -> GenSeries:
    """``g**p`` for rational ``p``; fractional powers need a positive germ."""
    p = Fraction(p)
    if p.denominator == 1 and p >= 0:
        return g ** int(p)
    if p.denominator == 1:
        return series_reciprocal(g, K, params) ** int(-p)
    a, q, t = split_dominant(g, params)
    if coeffs.sign(a, params) != 1:
        from .errors import NonPositive

        raise NonPositive(f"fractional power of a germ with leading coefficient {coeffs.fmt(a)}")
    inner = GenSeries.constant(1, g.cell)
    if t.terms or t.tail is not None:
        exponent = sympy.Rational(p.numerator, p.denominator)
        inner = compose(univariate((1 + _T) ** exponent, K), [t], K)
    return inner.shift(q * p).scale(coeffs.power(a, p))


# -- special units and prepared forms -------------------------------------------------

_RANGE_SLACK = 1e-9


def _unit_symbols(s: int) -> tuple[sympy.Symbol, ...]:
    return tuple(sympy.Symbol(f"t{i + 1}") for i in range(s))


@dataclass(frozen=True)
class SpecialUnit:
    """``v(b_1 |Y|^{p_1}, ..., b_s |Y|^{p_s})`` bounded in ``[d1, d2]``.

    ``v`` is either an exact polynomial (``poly``: multi-index -> coefficient)
    or a sympy expression in ``t1..ts`` (``function``) whose Taylor
    coefficients are taken to any requested degree.  ``degree`` is the
    truncation used for the bounds; ``remainder`` optionally records a known
    ``O(|Y|^remainder)`` error inside the unit.
    """

    bases: tuple[tuple[Coeff, ExponentTuple], ...]
    cell: SimpleCell
    poly: Mapping[tuple[int, ...], Coeff] | None = None
    function: sympy.Expr | None = None
    degree: int = DEFAULT_TRUNC
    tail_bound: Fraction = Fraction(0)
    remainder: ExponentTuple | None = None
    d1: float = field(init=False, default=0.0)
    d2: float = field(init=False, default=0.0)
    validate: InitVar[bool] = True
    params: InitVar[Params | None] = None

    def __post_init__(self, validate: bool, params: Params | None):
        bases = tuple(
            (coeffs.as_coeff(b), p if isinstance(p, ExponentTuple) else ExponentTuple(p)) for b, p in self.bases
        )
        object.__setattr__(self, "bases", bases)
        if (self.poly is None) == (self.function is None):
            raise InvalidUnit("give exactly one of poly= or function=")
        if self.poly is not None:
            poly = {tuple(a): coeffs.as_coeff(c) for a, c in self.poly.items()}
            if any(len(a) != len(bases) for a in poly):
                raise InvalidUnit("multi-index length differs from the number of bases")
            object.__setattr__(self, "poly", poly)
        for b, p in bases:
            if len(p) != self.cell.r + 1:
                raise InvalidUnit(f"base exponent {p} does not match the cell order")
            if coeffs.is_zero(b):
                raise InvalidUnit("base coefficients must be nonzero")
        if not validate:
            return
        for _, p in bases:
            if not (p.is_zero() or tends_to_zero(p)):
                raise BaseDiverges(f"base monomial |Y|^{p} is unbounded near 0")
        rho = [sup_abs([(b, p)], self.cell, params) for b, p in bases]
        for (b, p), bound in zip(bases, rho):
            if bound > 1 + _RANGE_SLACK:
                raise InvalidUnit(f"base {coeffs.fmt(b)}*|Y|^{p} leaves [-1, 1] on the cell (sup ~ {bound:.4g})")
        c = self.coefficients(self.degree)
        c0 = coeffs.to_mpf(c.get((0,) * len(bases), coeffs.ZERO), params)
        spread = mpmath.mpf(0)
        for alpha, ca in c.items():
            if any(alpha):
                weight = mpmath.mpf(1)
                for n, bound in zip(alpha, rho):
                    weight *= mpmath.mpf(bound) ** n
                spread += abs(coeffs.to_mpf(ca, params)) * weight
        spread += mpmath.mpf(self.tail_bound.numerator) / self.tail_bound.denominator
        d1, d2 = float(c0 - spread), float(c0 + spread)
        if not d1 > 0:
            raise InvalidUnit(f"unit bounds [{d1:.4g}, {d2:.4g}] are not positive")
        object.__setattr__(self, "d1", d1)
        object.__setattr__(self, "d2", d2)

    @classmethod
    def constant(cls, cell: SimpleCell, value=1) -> "SpecialUnit":
        return cls((), cell, poly={(): coeffs.as_coeff(value)})

    @classmethod
    def from_function(cls, function, bases, cell: SimpleCell, **kw) -> "SpecialUnit":
        if isinstance(function, str):
            function = sympy.sympify(function)
        return cls(tuple(bases), cell, function=function, **kw)

    @property
    def s(self) -> int:
        return len(self.bases)

    @property
    def symbols(self) -> tuple[sympy.Symbol, ...]:
        return _unit_symbols(self.s)

    def is_polynomial(self) -> bool:
        return self.poly is not None

    def poly_degree(self) -> int:
        return max((sum(a) for a in self.poly), default=0) if self.poly is not None else -1

    def coefficients(self, K: int) -> dict[tuple[int, ...], Coeff]:
        if self.poly is not None:
            return {a: c for a, c in self.poly.items() if sum(a) <= K}
        zero = tuple(sympy.Integer(0) for _ in range(self.s))
        return taylor_coefficients(self.function, self.symbols, zero, K)

    def evaluate(self, y, params: Params | None = None) -> mpmath.mpf:
        """``v`` at the base values; the full function for ``function`` units."""
        from .monomial import mono_eval

        xs = [mono_eval(LogMonomial(b, p, self.cell), y, params) for b, p in self.bases]
        return self.value_at(xs, params)

    def value_at(self, xs, params: Params | None = None) -> mpmath.mpf:
        """``v(x_1, ..., x_s)`` at explicit base values."""
        if self.poly is not None:
            total = mpmath.mpf(0)
            for alpha, c in self.poly.items():
                term = coeffs.to_mpf(c, params)
                for x, n in zip(xs, alpha):
                    term *= x**n
                total += term
            return total
        fn = _lambdified(self.function, self.symbols)
        return mpmath.mpf(fn(*xs))

    def with_cell(self, cell: SimpleCell) -> "SpecialUnit":
        return SpecialUnit(
            self.bases,
            cell,
            poly=self.poly,
            function=self.function,
            degree=self.degree,
            tail_bound=self.tail_bound,
            remainder=self.remainder,
        )


@lru_cache(maxsize=256)
def _lambdified(expr: sympy.Expr, symbols: tuple[sympy.Symbol, ...]):
    return sympy.lambdify(symbols, expr, modules="mpmath")


@dataclass(frozen=True)
class PreparedForm:
    """``a |Y|^q u`` on the unit's cell."""

    a: Coeff
    q: ExponentTuple
    unit: SpecialUnit

    def __post_init__(self):
        object.__setattr__(self, "a", coeffs.as_coeff(self.a))
        if not isinstance(self.q, ExponentTuple):
            object.__setattr__(self, "q", ExponentTuple(self.q))
        if len(self.q) != self.unit.cell.r + 1:
            raise InvalidUnit("exponent length does not match the unit's cell")

    @property
    def cell(self) -> SimpleCell:
        return self.unit.cell

    def is_zero(self) -> bool:
        return coeffs.is_zero(self.a)


def expand_unit(p: PreparedForm, K: int = DEFAULT_TRUNC) -> GenSeries:
    """``a |Y|^q sum_{|alpha|<=K} c_alpha prod (b_i |Y|^{p_i})^alpha_i`` as a series."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    cell = p.cell
    if p.is_zero():
        return GenSeries.zero(cell)
    tail = expansion_tail(p, K)
    out: dict[ExponentTuple, Coeff] = {}
    for _, coef, exp in unit_terms(p, K):
        if tail is not None and not dominates(exp, tail):
            continue
        out[exp] = coeffs.add(out[exp], coef) if exp in out else coef
    return GenSeries.build(out, cell, tail)


def unit_terms(p: PreparedForm, K: int) -> list[tuple[tuple[int, ...], Coeff, ExponentTuple]]:
    """``(alpha, a c_alpha prod b_i^alpha_i, q + sum alpha_i p_i)`` for ``|alpha| <= K``."""
    out = []
    for alpha, c in p.unit.coefficients(K).items():
        if coeffs.is_zero(c):
            continue
        exp = p.q
        coef = coeffs.mul(p.a, c)
        for (b, bp), n in zip(p.unit.bases, alpha):
            if n:
                exp = exp + bp * n
                coef = coeffs.mul(coef, coeffs.power(b, Fraction(n)))
        out.append((alpha, coef, exp))
    return out


def expansion_tail(p: PreparedForm, K: int) -> ExponentTuple | None:
    """Remainder exponent of :func:`expand_unit` at degree ``K``."""
    unit = p.unit
    truncated = not unit.is_polynomial() or unit.poly_degree() > K
    vanishing = [bp for _, bp in unit.bases if not bp.is_zero()]
    tail = None
    if truncated:
        if len(vanishing) < unit.s or not vanishing:
            raise NonVanishingBases(
                "a truncated unit evaluated at non-vanishing base monomials has no asymptotic remainder"
            )
        tail = p.q + max_dominant(vanishing) * (K + 1)
    if unit.remainder is not None:
        tail = _max_tail(tail, p.q + unit.remainder)
    return tail


#: factor_prepared shrinks the cell until the unit deviates from 1 by at most this
UNIT_DEVIATION = 0.5


def factor_prepared(f: GenSeries, params: Params | None = None) -> PreparedForm:
    """Factor ``f`` as dominant coefficient x dominant monomial x linear unit.

    The cell is shrunk so that every base lies in ``[-1, 1]`` and the unit
    stays within ``[1/2, 3/2]``.
    """
    a, q, t = split_dominant(f, params)
    rest = t.items()
    cell = f.cell
    for _, p in rest:
        cell = shrink_for_bound([(coeffs.ONE, p)], cell, 1.0, params)
    if rest:
        cell = shrink_for_bound(rest, cell, UNIT_DEVIATION, params)
    s = len(rest)
    poly = {(0,) * s: coeffs.ONE}
    for i, (c, _) in enumerate(rest):
        alpha = tuple(1 if k == i else 0 for k in range(s))
        poly[alpha] = c
    unit = SpecialUnit(
        tuple((coeffs.ONE, p) for _, p in rest),
        cell,
        poly=poly,
        degree=1,
        remainder=t.tail,
        params=params,
    )
    return PreparedForm(a, q, unit)


# -- display -------------------------------------------------------------------


def format_monomial(c: Coeff, q: ExponentTuple) -> str:
    factors = []
    for j, e in enumerate(q):
        if e == 0:
            continue
        name = "y" if j == 0 else f"|y{j}|"
        factors.append(name if e == 1 else f"{name}^{e}" if e.denominator == 1 and e > 0 else f"{name}^({e})")
    body = "*".join(factors)
    cs = coeffs.fmt(c)
    if not body:
        return cs
    if cs == "1":
        return body
    if cs == "-1":
        return "-" + body
    if not coeffs.is_rational(c) and any(ch in cs for ch in "+- "):
        cs = f"({cs})"
    return f"{cs}*{body}"


def format_series(f: GenSeries) -> str:
    parts = [format_monomial(m.coeff, m.exp) for m in f.terms]
    if f.tail is not None:
        parts.append(f"O({format_monomial(coeffs.ONE, f.tail)})")
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


def multi_indices(s: int, K: int):
    """All multi-indices of length ``s`` and total degree ``<= K``."""
    for d in range(K + 1):
        yield from _multi_indices(s, d)


__all__ = [
    "DEFAULT_TRUNC",
    "GenSeries",
    "PreparedForm",
    "SpecialUnit",
    "compose",
    "expand_unit",
    "factor_prepared",
    "format_series",
    "lift_order",
    "series_add",
    "series_mul",
    "series_power",
    "series_reciprocal",
    "split_dominant",
    "taylor_coefficients",
    "unit_terms",
    "univariate",
]
