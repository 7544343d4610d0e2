"""Elementary logarithmic scales on simple cells.

On a cell ``(0, d)`` with ``d <= 1/e_r`` the only r-logarithmic scale is the
elementary one::

    y_0 = y,  y_1 = log y,  y_j = log|y_{j-1}|   (j >= 2)

with sign vector ``(1, -1, 1, ..., 1)``.  Exponent tuples are exact rationals.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import mpmath

from .errors import DomainViolation, LengthMismatch, PrecisionOverflow, ZeroTuple

#: largest scale order accepted anywhere; may be raised by callers
MAX_ORDER = 8

# exp() arguments beyond this cannot be represented at any useful precision
_EXP_ARG_LIMIT = mpmath.mpf(2) ** 62

_DEFAULT_MARGIN = 1 - Fraction(1, 2**16)


def check_order(r: int) -> int:
    if not isinstance(r, int) or r < 0:
        raise ValueError(f"scale order must be a nonnegative integer, got {r!r}")
    if r > MAX_ORDER:
        raise ValueError(f"scale order {r} exceeds the configured maximum {MAX_ORDER}")
    return r


def exp_tower(r: int, dps: int | None = None) -> mpmath.mpf:
    """``e_r`` with ``e_0 = 0`` and ``e_r = exp(e_{r-1})``."""
    check_order(r)
    with mpmath.workdps(dps or mpmath.mp.dps):
        e = mpmath.mpf(0)
        for _ in range(r):
            if e > _EXP_ARG_LIMIT:
                raise PrecisionOverflow(f"e_{r} is not representable")
            e = mpmath.exp(e)
        return +e


def inverse_exp_tower(r: int, dps: int | None = None) -> mpmath.mpf:
    """``1/e_r``, with ``1/e_0 = +inf``."""
    if r == 0:
        return mpmath.inf
    with mpmath.workdps(dps or mpmath.mp.dps):
        e_prev = exp_tower(r - 1)
        if e_prev > _EXP_ARG_LIMIT:
            raise PrecisionOverflow(f"1/e_{r} is not representable")
        return mpmath.exp(-e_prev)


def mpf_to_fraction(x: mpmath.mpf) -> Fraction:
    man, exp = x.man_exp
    man = int(man)
    if exp >= 0:
        return Fraction(man * 2**exp)
    return Fraction(man, 2 ** (-exp))


def fraction_to_mpf(q: Fraction) -> mpmath.mpf:
    return mpmath.mpf(q.numerator) / q.denominator


def as_mpf(x) -> mpmath.mpf:
    """``mpmath.mpf`` from ints, floats, strings, mpf values or Fractions."""
    if isinstance(x, Fraction):
        return fraction_to_mpf(x)
    return mpmath.mpf(x)


def _below_inverse_tower(upper: Fraction, r: int) -> bool:
    """Exact-enough test ``upper <= 1/e_r`` without forming ``e_r``.

    ``u <= 1/e_r`` iff ``-log u >= e_{r-1}``; taking logs on the left peels off
    one tower level per step, so no huge numbers appear.
    """
    if r == 0:
        return True
    with mpmath.workdps(50):
        lhs = -mpmath.log(fraction_to_mpf(upper))
        level = r - 1
        while level > 0:
            if lhs <= 0:
                return False
            lhs = mpmath.log(lhs)
            level -= 1
        return lhs >= 0


@dataclass(frozen=True)
class SimpleCell:
    """The interval ``(0, upper)`` carrying the order-``r`` elementary scale.

    ``upper is None`` stands for ``+inf`` and is only allowed for ``r = 0``.
    """

    r: int
    upper: Fraction | None = None

    def __post_init__(self):
        check_order(self.r)
        if self.upper is None:
            if self.r != 0:
                raise DomainViolation(f"an order-{self.r} cell needs a finite upper bound <= 1/e_{self.r}")
            return
        upper = Fraction(self.upper)
        object.__setattr__(self, "upper", upper)
        if upper <= 0:
            raise DomainViolation("cell upper bound must be positive")
        if not _below_inverse_tower(upper, self.r):
            raise DomainViolation(f"cell upper bound {float(upper):.6g} exceeds 1/e_{self.r}")

    @classmethod
    def default(cls, r: int) -> "SimpleCell":
        """``(0, (1/e_r)(1 - 2^-16))``, rounded down to a dyadic rational."""
        check_order(r)
        if r == 0:
            return cls(0, None)
        with mpmath.workprec(80):
            bound = mpf_to_fraction(inverse_exp_tower(r))
        bound *= _DEFAULT_MARGIN * (1 - Fraction(1, 2**60))
        return cls(r, round_down(bound))

    def __repr__(self) -> str:
        return f"SimpleCell(r={self.r}, upper={format_bound(self.upper)})"

    def upper_mpf(self) -> mpmath.mpf:
        return mpmath.inf if self.upper is None else fraction_to_mpf(self.upper)

    def with_upper(self, upper: Fraction | None) -> "SimpleCell":
        return SimpleCell(self.r, upper)

    def with_order(self, r: int) -> "SimpleCell":
        """Same interval at another order (the bound must still fit)."""
        return SimpleCell(r, self.upper)

    def contains(self, y) -> bool:
        y = as_mpf(y)
        return bool(y > 0 and (self.upper is None or y < fraction_to_mpf(self.upper)))

    def meet(self, other: "SimpleCell") -> "SimpleCell":
        """Intersection of two cells of equal order."""
        if other.r != self.r:
            raise ValueError("cells of different order")
        if self.upper is None:
            return other
        if other.upper is None or self.upper <= other.upper:
            return self
        return other


def format_bound(u: Fraction | None) -> str:
    """``"p/q"``, or ``"m*2^-k"`` for dyadics too long to print in full."""
    if u is None:
        return "inf"
    den = u.denominator
    if den.bit_length() <= 256 or den & (den - 1):
        return str(u)
    return f"{u.numerator}*2^-{den.bit_length() - 1}"


def parse_bound(text: str) -> Fraction | None:
    text = text.strip()
    if text == "inf":
        return None
    if "*2^" in text:
        m, e = text.split("*2^")
        return Fraction(int(m)) * Fraction(2) ** int(e)
    return Fraction(text)


def round_down(q: Fraction, bits: int = 64) -> Fraction:
    """Largest dyadic with a ``bits``-bit mantissa not exceeding ``q > 0``."""
    e = q.numerator.bit_length() - q.denominator.bit_length() - bits
    if e >= 0:
        m = q.numerator // (q.denominator * 2**e)
        return Fraction(m * 2**e)
    m = (q.numerator * 2 ** (-e)) // q.denominator
    return Fraction(m, 2 ** (-e))


def elementary_signs(r: int) -> tuple[int, ...]:
    """Sign vector of the elementary scale: ``(1, -1, 1, ..., 1)``."""
    check_order(r)
    return (1,) if r == 0 else (1, -1) + (1,) * (r - 1)


def scale_values(cell: SimpleCell, y) -> tuple[mpmath.mpf, ...]:
    """``(y_0, ..., y_r)`` at a point of the cell."""
    y = as_mpf(y)
    if not cell.contains(y):
        raise DomainViolation(f"y = {mpmath.nstr(y, 8)} is outside (0, {cell.upper})")
    out = [y]
    if cell.r >= 1:
        out.append(mpmath.log(y))
    for _ in range(2, cell.r + 1):
        out.append(mpmath.log(abs(out[-1])))
    return tuple(out)


def scale_log_abs(cell: SimpleCell, y) -> tuple[mpmath.mpf, ...]:
    """``(log|y_0|, ..., log|y_r|)``; note ``log|y_j| = y_{j+1}``."""
    y = as_mpf(y)
    if not cell.contains(y):
        raise DomainViolation(f"y = {mpmath.nstr(y, 8)} is outside (0, {cell.upper})")
    out = [mpmath.log(y)]
    for _ in range(cell.r):
        out.append(mpmath.log(abs(out[-1])))
    return tuple(out)


class ExponentTuple:
    """Immutable vector ``q = (q_0, ..., q_r)`` of exact rationals.

    Supports ``+``, ``-``, unary ``-`` and scaling by rationals.
    """

    __slots__ = ("_q", "_hash")

    def __init__(self, entries: Iterable):
        q = tuple(e if isinstance(e, Fraction) else Fraction(e) for e in entries)
        if not q:
            raise ValueError("an exponent tuple has at least one entry")
        self._q = q
        self._hash = hash(q)

    @classmethod
    def zero(cls, r: int) -> "ExponentTuple":
        return cls((0,) * (r + 1))

    @classmethod
    def unit(cls, r: int, j: int, value=1) -> "ExponentTuple":
        """Tuple with ``value`` at index ``j`` and zeros elsewhere."""
        q = [0] * (r + 1)
        q[j] = value
        return cls(q)

    @property
    def r(self) -> int:
        return len(self._q) - 1

    @property
    def entries(self) -> tuple[Fraction, ...]:
        return self._q

    def __len__(self) -> int:
        return len(self._q)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self._q)

    def __getitem__(self, i):
        return self._q[i]

    def __eq__(self, other) -> bool:
        if isinstance(other, ExponentTuple):
            return self._q == other._q
        return NotImplemented

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return "(" + ", ".join(str(e) for e in self._q) + ")"

    def _check(self, other: "ExponentTuple"):
        if len(other._q) != len(self._q):
            raise LengthMismatch(f"exponent tuples of length {len(self._q)} and {len(other._q)}")

    def __add__(self, other: "ExponentTuple") -> "ExponentTuple":
        self._check(other)
        return ExponentTuple(a + b for a, b in zip(self._q, other._q))

    def __sub__(self, other: "ExponentTuple") -> "ExponentTuple":
        self._check(other)
        return ExponentTuple(a - b for a, b in zip(self._q, other._q))

    def __neg__(self) -> "ExponentTuple":
        return ExponentTuple(-a for a in self._q)

    def __mul__(self, k) -> "ExponentTuple":
        k = Fraction(k)
        return ExponentTuple(k * a for a in self._q)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self._q)

    def padded(self, r: int) -> "ExponentTuple":
        """The same monomial viewed at a higher order ``r``."""
        if r < self.r:
            raise ValueError("cannot pad to a lower order")
        return ExponentTuple(self._q + (Fraction(0),) * (r - self.r))

    def dominance_key(self) -> tuple[Fraction, ...]:
        """Sort key increasing with asymptotic size as ``y -> 0+``."""
        return (-self._q[0],) + self._q[1:]

    def to_strings(self) -> list[str]:
        return [str(e) for e in self._q]


def first_nonzero(q: ExponentTuple) -> tuple[int, int] | None:
    """``(j(q), sigma(q))``, or ``None`` for the zero tuple."""
    for j, e in enumerate(q):
        if e != 0:
            return j, (1 if e > 0 else -1)
    return None


def q_diff(q: ExponentTuple) -> ExponentTuple:
    """Subtract 1 from entries ``0..j(q)``; the exponent of ``d/dy |Y|^q``'s lead."""
    found = first_nonzero(q)
    if found is None:
        raise ZeroTuple("q_diff is undefined for the zero tuple")
    j = found[0]
    return ExponentTuple([e - 1 if i <= j else e for i, e in enumerate(q)])
