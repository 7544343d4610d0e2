"""JSON-ready records for exponents, series, prepared forms and reports.

Exact rationals are written as canonical ``Fraction`` strings (``"5/2"``,
``"-1"``); non-rational coefficients use sympy's string form.  Every function
here is deterministic.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Any

import mpmath

from . import coeffs
from .calculus import SmoothnessReport, TaylorSplit
from .monomial import Limit, LimitKind
from .scale import ExponentTuple, SimpleCell, format_bound, parse_bound
from .series import GenSeries, PreparedForm, format_monomial, format_series

SCHEMA = 1


def exponent_to_json(q: ExponentTuple | None) -> list[str] | None:
    return None if q is None else q.to_strings()


def exponent_from_json(data: list[str] | None) -> ExponentTuple | None:
    return None if data is None else ExponentTuple(Fraction(s) for s in data)


def cell_to_json(cell: SimpleCell) -> dict[str, Any]:
    return {"r": cell.r, "upper": format_bound(cell.upper)}


def cell_from_json(data: dict[str, Any]) -> SimpleCell:
    return SimpleCell(int(data["r"]), parse_bound(str(data["upper"])))


def monomial_to_json(c, q: ExponentTuple) -> dict[str, Any]:
    return {"coeff": coeffs.fmt(c), "exponents": exponent_to_json(q)}


def series_to_json(f: GenSeries) -> dict[str, Any]:
    return {
        "terms": [monomial_to_json(m.coeff, m.exp) for m in f.terms],
        "tail": exponent_to_json(f.tail),
        "r": f.r,
        "upper": format_bound(f.cell.upper),
    }


def series_from_json(data: dict[str, Any]) -> GenSeries:
    cell = SimpleCell(int(data["r"]), parse_bound(str(data["upper"])))
    items = [(coeffs.parse(t["coeff"]), exponent_from_json(t["exponents"])) for t in data["terms"]]
    return GenSeries.build(items, cell, exponent_from_json(data.get("tail")))


def prepared_to_json(p: PreparedForm) -> dict[str, Any]:
    unit = p.unit
    record: dict[str, Any] = {
        "a": coeffs.fmt(p.a),
        "q": exponent_to_json(p.q),
        "cell": cell_to_json(p.cell),
        "unit": {
            "bases": [monomial_to_json(b, bp) for b, bp in unit.bases],
            "d1": float_str(unit.d1),
            "d2": float_str(unit.d2),
            "remainder": exponent_to_json(unit.remainder),
        },
    }
    if unit.poly is not None:
        record["unit"]["poly"] = [
            {"alpha": list(alpha), "coeff": coeffs.fmt(c)} for alpha, c in sorted(unit.poly.items())
        ]
    else:
        record["unit"]["function"] = str(unit.function)
    return record


def limit_to_json(lim: Limit) -> dict[str, Any]:
    value = None if lim.kind is not LimitKind.FINITE else coeffs.fmt(lim.value)
    return {"kind": lim.kind.value, "value": value}


def order_to_json(order: int | float):
    return "inf" if order == math.inf else int(order)


def smoothness_to_json(rep: SmoothnessReport) -> dict[str, Any]:
    return {
        "limit": limit_to_json(rep.limit_at_0),
        "mu": exponent_to_json(rep.mu),
        "max_C_order": order_to_json(rep.max_C_order),
        "analytic": rep.analytic_at_0,
    }


def taylor_to_json(split: TaylorSplit) -> dict[str, Any]:
    return {
        "degree": split.degree,
        "analytic_part": [{"k": k, "d": coeffs.fmt(c)} for k, c in split.analytic_part],
        "singular_part": series_to_json(split.singular_part),
        "gamma1": [list(a) for a in split.gamma1],
    }


def float_str(x, digits: int = 17) -> str:
    """Fixed-precision decimal string for floats and mpf values."""
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        x = mpmath.mpf(x)
    return mpmath.nstr(x, digits)


def pretty_series(f: GenSeries) -> str:
    return format_series(f)


def pretty_monomial(c, q: ExponentTuple) -> str:
    return format_monomial(c, q)
