"""Log-monomials ``c |Y|^q``: evaluation, limits, dominance and derivatives."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import mpmath
import numpy as np

from . import coeffs
from .coeffs import Coeff, Params
from .errors import DomainViolation, LengthMismatch
from .scale import (
    ExponentTuple,
    SimpleCell,
    first_nonzero,
    mpf_to_fraction,
    round_down,
    scale_log_abs,
)


class LimitKind(enum.Enum):
    ZERO = "Zero"
    POS_INF = "PosInfinity"
    NEG_INF = "NegInfinity"
    FINITE = "Finite"
    NO_LIMIT = "NoLimit"


@dataclass(frozen=True)
class Limit:
    """Limit as ``y -> 0+``; ``value`` is set only for ``FINITE``."""

    kind: LimitKind
    value: Coeff | None = None

    @classmethod
    def finite(cls, value) -> "Limit":
        return cls(LimitKind.FINITE, coeffs.as_coeff(value))

    def is_bounded(self) -> bool:
        return self.kind in (LimitKind.ZERO, LimitKind.FINITE)

    def is_infinite(self) -> bool:
        return self.kind in (LimitKind.POS_INF, LimitKind.NEG_INF)

    def __str__(self) -> str:
        if self.kind is LimitKind.FINITE:
            return f"Finite({coeffs.fmt(self.value)})"
        return self.kind.value


ZERO_LIMIT = Limit(LimitKind.ZERO)
POS_INF = Limit(LimitKind.POS_INF)
NEG_INF = Limit(LimitKind.NEG_INF)
NO_LIMIT = Limit(LimitKind.NO_LIMIT)


class Dominance(enum.Enum):
    SMALLER = "SmallerO"
    EQUAL = "Equal"
    LARGER = "LargerOmega"


@dataclass(frozen=True)
class LogMonomial:
    coeff: Coeff
    exp: ExponentTuple
    cell: SimpleCell = field(default=None)

    def __post_init__(self):
        object.__setattr__(self, "coeff", coeffs.as_coeff(self.coeff))
        if not isinstance(self.exp, ExponentTuple):
            object.__setattr__(self, "exp", ExponentTuple(self.exp))
        if self.cell is None:
            object.__setattr__(self, "cell", SimpleCell.default(self.exp.r))
        if self.cell.r != self.exp.r:
            raise LengthMismatch(f"exponent of length {len(self.exp)} on an order-{self.cell.r} cell")

    def __mul__(self, other: "LogMonomial") -> "LogMonomial":
        if self.cell != other.cell:
            from .errors import CellMismatch

            raise CellMismatch("monomials live on different cells")
        return LogMonomial(coeffs.mul(self.coeff, other.coeff), self.exp + other.exp, self.cell)


def mono_eval(m: LogMonomial, y, params: Params | None = None) -> mpmath.mpf:
    """``coeff * prod |y_j|^{q_j}`` at the current mpmath precision."""
    logs = scale_log_abs(m.cell, y)
    return coeffs.to_mpf(m.coeff, params) * _exp_of(m.exp, logs)


def _exp_of(q: ExponentTuple, logs: Sequence[mpmath.mpf]) -> mpmath.mpf:
    s = mpmath.mpf(0)
    for e, lg in zip(q, logs):
        if e:
            s += mpmath.mpf(e.numerator) / e.denominator * lg
    return mpmath.exp(s)


def mono_limit(q: ExponentTuple) -> Limit:
    """Limit of ``|Y|^q`` as ``y -> 0+`` on a simple cell."""
    found = first_nonzero(q)
    if found is None:
        return Limit.finite(1)
    j, sigma = found
    if j == 0:
        return ZERO_LIMIT if sigma > 0 else POS_INF
    return POS_INF if sigma > 0 else ZERO_LIMIT


def dominance_cmp(lam: ExponentTuple, mu: ExponentTuple) -> Dominance:
    """Compare ``|Y|^lam`` with ``|Y|^mu`` through the limit of their ratio."""
    if len(lam) != len(mu):
        raise LengthMismatch(f"exponent tuples of length {len(lam)} and {len(mu)}")
    kind = mono_limit(lam - mu).kind
    if kind is LimitKind.ZERO:
        return Dominance.SMALLER
    if kind is LimitKind.POS_INF:
        return Dominance.LARGER
    return Dominance.EQUAL


def tends_to_zero(q: ExponentTuple) -> bool:
    return mono_limit(q).kind is LimitKind.ZERO


def dominates(lam: ExponentTuple, mu: ExponentTuple) -> bool:
    """``|Y|^mu = o(|Y|^lam)``."""
    return lam.dominance_key() > mu.dominance_key()


def max_dominant(qs: Iterable[ExponentTuple]) -> ExponentTuple | None:
    qs = list(qs)
    return max(qs, key=ExponentTuple.dominance_key) if qs else None


def mono_derivative(m: LogMonomial) -> list[LogMonomial]:
    """Exact ``d/dy`` of ``c |Y|^q``.

    Uses ``d|y_0|/dy = 1`` and ``d|y_j|/dy = -1/prod_{i<j} |y_i|``.  Terms come
    out in order of the differentiated factor; the first nonzero one carries
    the dominant exponent ``q_diff(q)``.
    """
    q = m.exp
    out = []
    for j, qj in enumerate(q):
        if qj == 0:
            continue
        c = coeffs.mul(m.coeff, qj if j == 0 else -qj)
        exp = ExponentTuple([e - 1 if i <= j else e for i, e in enumerate(q)])
        out.append(LogMonomial(c, exp, m.cell))
    return out


# -- cell bounds ---------------------------------------------------------------

# v = -log y; grid offsets above the cell's v_min, four points per doubling
_GRID = np.concatenate(([0.0], 2.0 ** (np.arange(-40 * 4, 4 * 640) / 4.0)))


def _log_scale_grid(v: np.ndarray, r: int) -> np.ndarray:
    """Rows ``(log|y_0|, ..., log|y_r|)`` at the points ``y = exp(-v)``."""
    cols = [-v]
    cur = -v
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        for _ in range(r):
            cur = np.log(np.abs(cur))
            cols.append(cur)
    return np.stack(cols, axis=1)


def _v_min(cell: SimpleCell, upper: Fraction | None = None) -> float:
    u = cell.upper if upper is None else upper
    if u is None:
        return -math.inf
    return -(math.log(u.numerator) - math.log(u.denominator))


def _sup_at(weights: np.ndarray, qmat: np.ndarray, r: int, v_min: float) -> float:
    if not math.isfinite(v_min):
        return math.inf
    v = v_min + _GRID * max(1.0, abs(v_min))
    logs = _log_scale_grid(v, r)
    with np.errstate(over="ignore", invalid="ignore"):
        vals = np.exp(logs @ qmat.T) @ weights
    vals = np.where(np.isnan(vals), np.inf, vals)
    return float(np.max(vals))


def _prepare_terms(terms, params):
    terms = list(terms)
    weights = np.array([coeffs.magnitude(coeffs.as_coeff(c), params) for c, _ in terms], dtype=float)
    qmat = np.array([[float(e) for e in q] for _, q in terms], dtype=float)
    return weights, qmat


def sup_abs(terms: Iterable[tuple[Coeff, ExponentTuple]], cell: SimpleCell, params: Params | None = None) -> float:
    """Sampled estimate of ``sup_{(0, upper)} sum |c| |Y|^q``.

    The grid is uniform in ``log(-log y)``-like spacing; this is a numerical
    estimate, not a certified bound.
    """
    weights, qmat = _prepare_terms(terms, params)
    if weights.size == 0:
        return 0.0
    return _sup_at(weights, qmat, cell.r, _v_min(cell))


def shrink_for_bound(
    terms: Iterable[tuple[Coeff, ExponentTuple]],
    cell: SimpleCell,
    bound: float,
    params: Params | None = None,
) -> SimpleCell:
    """Largest sub-cell on which ``sum |c| |Y|^q <= bound`` (sampled).

    Every ``q`` must tend to zero, otherwise no shrinking helps.
    """
    terms = list(terms)
    if not terms:
        return cell
    for _, q in terms:
        if not tends_to_zero(q):
            raise DomainViolation(f"|Y|^{q} does not tend to 0; no sub-cell bounds it")
    weights, qmat = _prepare_terms(terms, params)
    r = cell.r
    v0 = _v_min(cell)
    if _sup_at(weights, qmat, r, v0) <= bound:
        return cell
    # bisect in asinh(v) so that both moderate and astronomically small y are reachable
    lo = math.asinh(v0) if math.isfinite(v0) else -40.0
    hi = max(lo, 0.0) + 1.0
    while _sup_at(weights, qmat, r, math.sinh(hi)) > bound:
        hi = lo + 2 * (hi - lo)
        if hi > 700:
            raise DomainViolation("cannot shrink the cell enough to bound the expansion variables")
    for _ in range(60):
        mid = (lo + hi) / 2
        if _sup_at(weights, qmat, r, math.sinh(mid)) <= bound:
            hi = mid
        else:
            lo = mid
    with mpmath.workdps(30):
        u = mpf_to_fraction(mpmath.exp(-mpmath.mpf(math.sinh(hi))))
    # absorb float rounding in the bisection so the bound holds at the new endpoint
    return cell.with_upper(round_down(u * (1 - Fraction(1, 2**40)), 53))
