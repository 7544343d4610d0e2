"""High-precision evaluation and black-box numeric oracles.

The oracles (:func:`fd_derivative`, :func:`limit_probe`) only ever call an
evaluator ``y -> value``; they never inspect series structure, so they can
check symbolic results independently.
"""

from __future__ import annotations

import contextlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import mpmath

from . import coeffs
from .coeffs import Params
from .monomial import _exp_of, mono_eval
from .errors import DomainViolation
from .scale import ExponentTuple, SimpleCell, as_mpf, exp_tower, scale_log_abs
from .series import GenSeries, PreparedForm

Evaluator = Callable[[mpmath.mpf], mpmath.mpf]


@dataclass(frozen=True)
class PrecisionCtx:
    """Working precision, finite-difference step and sampling schedule.

    The schedule points are ``y_k = exp(-e_{r-1} - exp(k))``; they sit below
    ``1/e_r`` for every ``k`` and approach 0 doubly exponentially.
    """

    digits: int = 100
    fd_step: Fraction = Fraction(1, 10**30)
    ks: tuple[int, ...] = (1, 2, 3, 4, 5)
    plateau_tol: float = 1e-3

    def __post_init__(self):
        if self.digits < 50:
            raise ValueError("working precision must be at least 50 digits")
        object.__setattr__(self, "fd_step", Fraction(self.fd_step))
        object.__setattr__(self, "ks", tuple(self.ks))

    @contextlib.contextmanager
    def work(self):
        with mpmath.workdps(self.digits):
            yield

    def schedule(self, r: int) -> list[mpmath.mpf]:
        with self.work():
            shift = exp_tower(r - 1) if r >= 1 else mpmath.mpf(0)
            return [+mpmath.exp(-shift - mpmath.exp(k)) for k in self.ks]


DEFAULT_CTX = PrecisionCtx()


def eval_series(f: GenSeries, y, ctx: PrecisionCtx = DEFAULT_CTX, params: Params | None = None) -> mpmath.mpf:
    """Sum of the terms of ``f`` at ``y``; the remainder is ignored."""
    with ctx.work():
        return _eval_terms(f, y, params)


def _eval_terms(f: GenSeries, y, params: Params | None) -> mpmath.mpf:
    logs = scale_log_abs(f.cell, y)
    total = mpmath.mpf(0)
    for m in f.terms:
        total += coeffs.to_mpf(m.coeff, params) * _exp_of(m.exp, logs)
    return total


def tail_magnitude(f: GenSeries, y, ctx: PrecisionCtx = DEFAULT_CTX) -> mpmath.mpf | None:
    """``|Y|^beta`` at ``y`` for the remainder exponent (the constant is unknown)."""
    if f.tail is None:
        return None
    with ctx.work():
        return _exp_of(f.tail, scale_log_abs(f.cell, y))


def eval_with_tail(f: GenSeries, y, ctx: PrecisionCtx = DEFAULT_CTX, params: Params | None = None):
    """``(value, remainder magnitude or None)``."""
    return eval_series(f, y, ctx, params), tail_magnitude(f, y, ctx)


def series_evaluator(f: GenSeries, params: Params | None = None) -> Evaluator:
    """Evaluator at the caller's current precision, suitable for the oracles."""
    return lambda y: _eval_terms(f, y, params)


def eval_prepared(p: PreparedForm, y, ctx: PrecisionCtx = DEFAULT_CTX, params: Params | None = None) -> mpmath.mpf:
    """``a |Y|^q v(b_1 |Y|^p_1, ...)`` with the unit evaluated in full."""
    with ctx.work():
        return prepared_evaluator(p, params)(y)


def prepared_evaluator(p: PreparedForm, params: Params | None = None) -> Evaluator:
    from .monomial import LogMonomial

    outer = LogMonomial(p.a, p.q, p.cell) if not p.is_zero() else None

    def fn(y):
        if outer is None:
            return mpmath.mpf(0)
        return mono_eval(outer, y, params) * p.unit.evaluate(y, params)

    return fn


def analytic_evaluator(p: PreparedForm, params: Params | None = None) -> Evaluator:
    """Evaluator of ``p`` on a two-sided neighbourhood of 0.

    Only forms built from nonnegative integer powers of ``y`` (no logarithmic
    factors) extend across 0; for those the prepared form is an analytic
    function of ``y`` and this evaluator accepts ``y <= 0`` too.
    """

    def integral_power(q: ExponentTuple) -> int:
        if any(q[1:]) or q[0].denominator != 1 or q[0] < 0:
            raise DomainViolation(f"|Y|^{q} has no analytic extension across 0")
        return int(q[0])

    n = integral_power(p.q)
    base_powers = [(b, integral_power(bp)) for b, bp in p.unit.bases]

    def fn(y):
        y = as_mpf(y)
        xs = [coeffs.to_mpf(b, params) * y**k for b, k in base_powers]
        return coeffs.to_mpf(p.a, params) * y**n * p.unit.value_at(xs, params)

    return fn


def fd_derivative(fn: Evaluator, y, m: int = 1, ctx: PrecisionCtx = DEFAULT_CTX) -> mpmath.mpf:
    """``m``-th central finite difference with step ``h = y * fd_step``.

    At ``y = 0`` the step is ``fd_step`` itself; ``fn`` must then be defined
    on both sides of 0 (see :func:`analytic_evaluator`).
    """
    if m < 0:
        raise ValueError("derivative order must be nonnegative")
    with ctx.work():
        y = as_mpf(y)
        if m == 0:
            return fn(y)
        step = mpmath.mpf(ctx.fd_step.numerator) / ctx.fd_step.denominator
        h = y * step if y != 0 else step
        return mpmath.diff(fn, y, m, h=h)


@dataclass(frozen=True)
class Trend:
    """Values along the schedule and the direction they move in.

    ``kind`` is one of ``"zero"``, ``"+inf"``, ``"-inf"``, ``"plateau"`` or
    ``"unclear"``; ``estimate`` is the last value for plateaus.
    """

    kind: str
    points: tuple[mpmath.mpf, ...]
    values: tuple[mpmath.mpf, ...]
    estimate: mpmath.mpf | None = None


def classify_trend(values: Sequence[mpmath.mpf], plateau_tol: float = 1e-3) -> str:
    v1, v2, v3 = values[-3:]
    a1, a2, a3 = abs(v1), abs(v2), abs(v3)
    if a3 != 0 and abs(v3 - v2) <= plateau_tol * a3:
        return "plateau"
    if a1 < a2 < a3 and mpmath.sign(v2) == mpmath.sign(v3):
        return "+inf" if v3 > 0 else "-inf"
    if a1 > a2 > a3 or (a3 == 0 and a2 == 0):
        return "zero"
    return "unclear"


def limit_probe(fn: Evaluator, r: int, ctx: PrecisionCtx = DEFAULT_CTX) -> Trend:
    """Sample ``fn`` along the schedule for order ``r`` and read off the trend."""
    if len(ctx.ks) < 3:
        raise ValueError("limit_probe needs at least three schedule points")
    with ctx.work():
        points = ctx.schedule(r)
        values = tuple(fn(y) for y in points)
    kind = classify_trend(values, ctx.plateau_tol)
    return Trend(kind, tuple(points), values, values[-1] if kind == "plateau" else None)


def trend_matches(kind: str, trend: Trend, finite_value=None, rel_tol: float = 1e-2) -> bool:
    """Whether the sampled trend is consistent with a symbolic limit kind.

    ``kind`` uses the symbolic names ``Zero``, ``PosInfinity``,
    ``NegInfinity`` and ``Finite``.
    """
    if kind == "Zero":
        return trend.kind == "zero" or (
            trend.kind == "plateau" and abs(trend.values[-1]) < mpmath.mpf(10) ** (-mpmath.mp.dps // 2)
        )
    if kind == "PosInfinity":
        return trend.kind == "+inf"
    if kind == "NegInfinity":
        return trend.kind == "-inf"
    if kind == "Finite":
        last = trend.values[-1]
        if finite_value is None:
            return trend.kind == "plateau"
        target = mpmath.mpf(finite_value)
        if abs(last - target) <= rel_tol * max(1, abs(target)):
            return True
        # slowly converging plateaus: the last samples must at least approach the target
        d = [abs(v - target) for v in trend.values[-3:]]
        return d[0] > d[1] > d[2]
    return False


def cell_contains_schedule(cell: SimpleCell, ctx: PrecisionCtx = DEFAULT_CTX) -> bool:
    return all(cell.contains(y) for y in ctx.schedule(cell.r))


__all__ = [
    "DEFAULT_CTX",
    "analytic_evaluator",
    "PrecisionCtx",
    "Trend",
    "classify_trend",
    "eval_prepared",
    "eval_series",
    "eval_with_tail",
    "fd_derivative",
    "limit_probe",
    "prepared_evaluator",
    "series_evaluator",
    "tail_magnitude",
    "trend_matches",
]
