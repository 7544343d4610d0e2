"""Rewriting expressions into generalized series on a simple cell.

Every intermediate germ is a :class:`GenSeries` at one fixed scale order.
Nonlinear steps go through the factorization ``g = a |Y|^q (1 + t)`` with
``t -> 0``:

* ``1/g = a^-1 |Y|^-q (1 + t)^-1``, and likewise for rational powers;
* ``log g = log a + sum_j q_j log|y_j| + log(1 + t)`` with
  ``log|y_0| = -|y_1|`` and ``log|y_j| = |y_{j+1}|`` for ``j >= 1``;
* ``F(g_1, ..., g_k)`` for a registered series ``F`` is the Taylor expansion
  of ``F`` at the limit point ``(c_1, ..., c_k)`` evaluated at ``g_i - c_i``.

Before each expansion the cell is shrunk until the expansion variables stay
within a fixed fraction of the convergence radius.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import mpmath
import sympy

from .. import coeffs
from ..coeffs import Coeff, Params
from ..errors import (
    CenterRequired,
    CompositionDomain,
    LogOfVanishing,
    NoDominantTerm,
    NonPositive,
    OrderExceeded,
    RawYDependence,
    SymbolicCoefficient,
)
from ..monomial import LimitKind, mono_limit, shrink_for_bound
from ..scale import ExponentTuple, SimpleCell, check_order, mpf_to_fraction, round_down
from ..series import DEFAULT_TRUNC, GenSeries, compose, lift_order, split_dominant, taylor_coefficients, univariate
from .ast import Add, Apply, Const, Div, Expr, Log, Mul, Param, Pow, Sub, Y, log_depth
from .registry import DEFAULT_REGISTRY, RegisteredSeries, lookup

_T = sympy.Symbol("t")

#: expansion variables are kept below this fraction of the convergence radius
DEFAULT_THETA = 0.5


@dataclass(frozen=True)
class PrepEnv:
    """Target scale order, starting cell, truncation degree and parameter values."""

    r: int
    cell: SimpleCell
    K: int = DEFAULT_TRUNC
    params: Mapping[str, Fraction] = field(default_factory=dict)
    registry: Mapping[str, RegisteredSeries] = field(default_factory=lambda: DEFAULT_REGISTRY)
    theta: float = DEFAULT_THETA

    def __post_init__(self):
        check_order(self.r)
        if self.cell.r != self.r:
            raise ValueError("the cell must carry the target scale order")
        object.__setattr__(self, "params", {k: Fraction(v) for k, v in self.params.items()})

    @classmethod
    def create(
        cls,
        r: int,
        upper: Fraction | str | None = None,
        K: int = DEFAULT_TRUNC,
        params: Mapping[str, Fraction] | None = None,
        registry: Mapping[str, RegisteredSeries] | None = None,
    ) -> "PrepEnv":
        """``upper`` may be a rational, ``"max"`` (just below ``1/e_r``) or ``None`` (default cell)."""
        if upper is None:
            cell = SimpleCell.default(r)
        elif upper == "max":
            cell = max_cell(r)
        else:
            cell = SimpleCell(r, Fraction(upper))
        return cls(r, cell, K, dict(params or {}), DEFAULT_REGISTRY if registry is None else registry)


def max_cell(r: int) -> SimpleCell:
    """The largest order-``r`` cell with a 64-bit dyadic bound."""
    if r == 0:
        return SimpleCell(0, None)
    from ..scale import inverse_exp_tower

    with mpmath.workprec(200):
        bound = mpf_to_fraction(inverse_exp_tower(r)) * (1 - Fraction(1, 2**100))
    return SimpleCell(r, round_down(bound))


def _align(*series: GenSeries) -> list[GenSeries]:
    cell = series[0].cell
    for s in series[1:]:
        cell = cell.meet(s.cell)
    return [s if s.cell == cell else s.restrict(cell) for s in series]


def _shrink(terms: list[tuple[Coeff, ExponentTuple]], cell: SimpleCell, bound: float, params: Params | None):
    try:
        return shrink_for_bound(terms, cell, bound, params)
    except SymbolicCoefficient as exc:
        raise SymbolicCoefficient(f"cannot bound an expansion variable: {exc}") from None


def _expansion_split(g: GenSeries, radius: float, theta: float, params: Params | None):
    """``(a, q, t)`` with the cell shrunk so that ``|t| <= theta * radius``."""
    a, q, t = split_dominant(g, params)
    cell = _shrink(t.items(), t.cell, theta * radius, params)
    if cell != t.cell:
        t = t.restrict(cell)
    return a, q, t


def _geometric_like(expr: sympy.Expr, t: GenSeries, K: int) -> GenSeries:
    if t.is_exact_zero():
        return GenSeries.constant(coeffs.as_coeff(expr.subs(_T, 0)), t.cell)
    return compose(univariate(expr, K), [t], K)


def reciprocal(g: GenSeries, K: int = DEFAULT_TRUNC, params: Params | None = None, theta: float = DEFAULT_THETA):
    """``1/g`` on a cell where the geometric expansion is safe."""
    a, q, t = _expansion_split(g, 1.0, theta, params)
    inner = _geometric_like(1 / (1 + _T), t, K)
    return inner.shift(-q).scale(coeffs.inv(a))


def rational_power(
    g: GenSeries, p: Fraction, K: int = DEFAULT_TRUNC, params: Params | None = None, theta: float = DEFAULT_THETA
) -> GenSeries:
    p = Fraction(p)
    if p.denominator == 1 and p >= 0:
        return g ** int(p)
    if p.denominator == 1:
        return reciprocal(g, K, params, theta) ** int(-p)
    a, q, t = _expansion_split(g, 1.0, theta, params)
    if coeffs.sign(a, params) != 1:
        raise NonPositive(f"fractional power of a germ with leading coefficient {coeffs.fmt(a)}")
    inner = _geometric_like((1 + _T) ** sympy.Rational(p.numerator, p.denominator), t, K)
    return inner.shift(q * p).scale(coeffs.power(a, p))


def _needed_order(q: ExponentTuple) -> int:
    top = max((j for j, e in enumerate(q) if e != 0), default=-1)
    return top + 1


def log_lift(
    f: GenSeries,
    K: int = DEFAULT_TRUNC,
    params: Params | None = None,
    theta: float = DEFAULT_THETA,
    order: int | None = None,
) -> GenSeries:
    """``log f`` for a germ that is positive near 0.

    The result lives at order ``max(r, 1 + max{j : q_j != 0})`` unless
    ``order`` pins it (then :class:`OrderExceeded` signals that more log
    levels are needed).
    """
    a, q, t = _expansion_split(f, 1.0, theta, params)
    s = coeffs.sign(a, params)
    if s is None:
        raise CenterRequired(f"sign of the leading coefficient {coeffs.fmt(a)} is undetermined")
    if s <= 0:
        raise NonPositive(f"log of a germ with leading coefficient {coeffs.fmt(a)}")
    needed = max(f.r, _needed_order(q))
    if order is not None:
        if needed > order:
            raise OrderExceeded(f"log needs scale order {needed} but the target order is {order}")
        needed = order
    r_out = needed
    inner = _geometric_like(sympy.log(1 + _T), t, K)
    inner = lift_order(inner, r_out)
    cell = inner.cell
    items = [(coeffs.log(a), ExponentTuple.zero(r_out))]
    for j, e in enumerate(q):
        if e == 0:
            continue
        # log|y_0| = -|y_1|; log|y_j| = |y_{j+1}| for j >= 1
        items.append((-e if j == 0 else e, ExponentTuple.unit(r_out, j + 1)))
    scale_part = GenSeries.build(items, cell)
    return scale_part + inner


def compose_registered(
    fn: RegisteredSeries,
    args: list[GenSeries],
    K: int = DEFAULT_TRUNC,
    params: Params | None = None,
    theta: float = DEFAULT_THETA,
) -> GenSeries:
    """``fn(g_1, ..., g_k)`` through the Taylor expansion of ``fn`` at the limit point."""
    if len(args) != fn.arity:
        raise CompositionDomain(f"{fn.name} takes {fn.arity} argument(s), got {len(args)}")
    args = _align(*args)
    centers: list[Coeff] = []
    rests: list[GenSeries] = []
    for g in args:
        if params:
            g = g.substitute(params)
        lead = g.lead()
        if lead is not None and mono_limit(lead).kind is LimitKind.POS_INF:
            raise CompositionDomain(f"argument of {fn.name} is unbounded near 0")
        if g.tail is not None and g.tail.is_zero():
            raise CompositionDomain(f"limit of the argument of {fn.name} is hidden in the remainder")
        c = g.constant_term()
        if coeffs.free_params(c):
            raise CompositionDomain(f"limit {coeffs.fmt(c)} of the argument of {fn.name} depends on a parameter")
        centers.append(c)
        rests.append(g - GenSeries.constant(c, g.cell))
    with mpmath.workdps(30):
        numeric_center = tuple(float(coeffs.to_mpf(c)) for c in centers)
    if not fn.contains(numeric_center):
        raise CompositionDomain(
            f"{fn.name} applied at limit point {tuple(coeffs.fmt(c) for c in centers)} outside |z| < {fn.radius}"
        )
    bound = theta * fn.local_radius(numeric_center)
    cell = rests[0].cell
    for t in rests:
        cell = _shrink(t.items(), cell, bound, params)
    rests = [t if t.cell == cell else t.restrict(cell) for t in rests]
    center = tuple(coeffs._to_sympy(c) for c in centers)
    table = taylor_coefficients(fn.expr, fn.variables, center, K)
    return compose(table, rests, K)


class _Preparer:
    def __init__(self, env: PrepEnv):
        self.env = env
        self.r = env.r

    def constant(self, c: Coeff) -> GenSeries:
        return GenSeries.constant(c, self.env.cell)

    def go(self, e: Expr) -> GenSeries:
        env = self.env
        if isinstance(e, Const):
            return self.constant(e.value)
        if isinstance(e, Param):
            if e.name in env.params:
                return self.constant(env.params[e.name])
            return self.constant(sympy.Symbol(e.name))
        if isinstance(e, Y):
            return GenSeries.variable(env.cell)
        if isinstance(e, (Add, Sub, Mul)):
            f, g = _align(self.go(e.left), self.go(e.right))
            if isinstance(e, Add):
                return f + g
            if isinstance(e, Sub):
                return f - g
            return f * g
        if isinstance(e, Div):
            num = self.go(e.left)
            den = reciprocal(self.go(e.right), env.K, env.params, env.theta)
            num, den = _align(num, den)
            return num * den
        if isinstance(e, Pow):
            return rational_power(self.go(e.base), e.exponent, env.K, env.params, env.theta)
        if isinstance(e, Log):
            inner = self.go(e.arg)
            try:
                return log_lift(inner, env.K, env.params, env.theta, order=self.r)
            except NonPositive as exc:
                raise LogOfVanishing(str(exc)) from None
            except CenterRequired:
                raise
            except NoDominantTerm:
                raise LogOfVanishing("log of a germ that vanishes identically") from None
        if isinstance(e, Apply):
            fn = lookup(e.name, env.registry)
            args = [self.go(a) for a in e.args]
            return compose_registered(fn, args, env.K, env.params, env.theta)
        raise TypeError(f"not an expression node: {e!r}")


def prepare(e: Expr, env: PrepEnv) -> GenSeries:
    """Generalized series at order ``env.r`` equal to ``e`` on the returned cell."""
    depth = log_depth(e)
    if depth > env.r:
        raise OrderExceeded(f"expression nests log {depth} deep but the target order is {env.r}")
    return _Preparer(env).go(e)


def prepare_text(
    text: str,
    r: int | None = None,
    upper=None,
    K: int = DEFAULT_TRUNC,
    params: Mapping[str, Fraction] | None = None,
) -> GenSeries:
    """Parse and prepare; the order defaults to the log-nesting depth."""
    from .parser import parse

    e = parse(text)
    env = PrepEnv.create(log_depth(e) if r is None else r, upper, K, params)
    return prepare(e, env)


# -- change of variable y -> -1/log(y) ---------------------------------------------


def loglog_substitute(f: GenSeries) -> GenSeries:
    """Rewrite a germ free of raw ``y`` powers in the variable ``-1/log y``.

    With ``w = -1/log y = |y_1|^-1`` one has ``|w_0| = |y_1|^-1`` and
    ``|w_j| = |y_{j+1}|`` for ``j >= 1``, so the exponent
    ``(0, q_1, ..., q_r)`` becomes ``(-q_1, q_2, ..., q_r)`` at order ``r - 1``.
    """
    if f.r < 1:
        raise ValueError("loglog_substitute needs scale order at least 1")
    for m in f.terms:
        if m.exp[0] != 0:
            raise RawYDependence(f"term with exponent {m.exp} depends on y itself")
    if f.tail is not None and f.tail[0] != 0:
        raise RawYDependence(f"remainder exponent {f.tail} depends on y itself")
    upper = f.cell.upper
    with mpmath.workprec(200):
        w_upper = mpf_to_fraction(-1 / mpmath.log(mpmath.mpf(upper.numerator) / upper.denominator))
    cell = SimpleCell(f.r - 1, round_down(w_upper * (1 - Fraction(1, 2**80))))

    def down(q: ExponentTuple) -> ExponentTuple:
        return ExponentTuple([-q[1], *q[2:]])

    tail = None if f.tail is None else down(f.tail)
    return GenSeries.build([(c, down(q)) for c, q in f.items()], cell, tail)


def loglog_unsubstitute(g: GenSeries) -> GenSeries:
    """Inverse of :func:`loglog_substitute`: substitute ``w = -1/log y`` back."""
    def up(p: ExponentTuple) -> ExponentTuple:
        return ExponentTuple([0, -p[0], *p[1:]])

    r = g.r + 1
    w_upper = g.cell.upper
    if w_upper is None:
        y_upper = SimpleCell.default(r).upper
    else:
        with mpmath.workprec(200):
            y_upper = mpf_to_fraction(mpmath.exp(-1 / (mpmath.mpf(w_upper.numerator) / w_upper.denominator)))
        y_upper = min(round_down(y_upper * (1 - Fraction(1, 2**80))), SimpleCell.default(r).upper)
    cell = SimpleCell(r, y_upper)
    tail = None if g.tail is None else up(g.tail)
    return GenSeries.build([(c, up(q)) for c, q in g.items()], cell, tail)

