from __future__ import annotations

import json
import math
from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from loganalytic.calculus import classify, taylor_split
from loganalytic.normalize import prepare_text
from loganalytic.scale import ExponentTuple, SimpleCell
from loganalytic.serialize import (
    cell_from_json,
    cell_to_json,
    order_to_json,
    prepared_to_json,
    series_from_json,
    series_to_json,
    smoothness_to_json,
    taylor_to_json,
)
from loganalytic.series import GenSeries, factor_prepared

E = ExponentTuple


def test_exponent_strings_are_canonical():
    f = GenSeries.build([(Fraction(-3, 2), E((1, Fraction(1, 2))))], SimpleCell.default(1))
    data = series_to_json(f)
    assert data["terms"] == [{"coeff": "-3/2", "exponents": ["1", "1/2"]}]
    assert data["tail"] is None


def test_cells_round_trip_including_deep_orders():
    for r in range(6):
        cell = SimpleCell.default(r)
        data = json.loads(json.dumps(cell_to_json(cell)))
        assert cell_from_json(data) == cell
    assert cell_to_json(SimpleCell(0, None)) == {"r": 0, "upper": "inf"}


@settings(max_examples=60, deadline=None)
@given(
    st.lists(
        st.tuples(
            st.fractions(min_value=-9, max_value=9, max_denominator=7).filter(bool),
            st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=5), min_size=3, max_size=3),
        ),
        max_size=6,
    ),
    st.none() | st.integers(1, 5),
)
def test_series_round_trip(items, tail):
    cell = SimpleCell.default(2)
    f = GenSeries.build([(c, E(q)) for c, q in items], cell, None if tail is None else E((tail, 0, 0)))
    again = series_from_json(json.loads(json.dumps(series_to_json(f))))
    assert again == f


def test_symbolic_coefficients_round_trip():
    f = prepare_text("y - x/log(y)")
    again = series_from_json(json.loads(json.dumps(series_to_json(f))))
    assert again.as_dict() == f.as_dict()
    assert again.coefficient(E((0, -1))) == sympy.Symbol("x")


def test_reports_are_json_ready():
    f = prepare_text("1/(1-y)", K=4)
    p = factor_prepared(f)
    for record in (
        prepared_to_json(p),
        taylor_to_json(taylor_split(p, 3)),
        smoothness_to_json(classify(f)),
    ):
        assert json.loads(json.dumps(record)) == record
    assert smoothness_to_json(classify(f))["max_C_order"] == "inf"
    assert order_to_json(math.inf) == "inf" and order_to_json(3) == 3


def test_serialization_is_deterministic():
    a = json.dumps(series_to_json(prepare_text("log(2 + y)*y^^(-1/2)")))
    b = json.dumps(series_to_json(prepare_text("log(2 + y)*y^^(-1/2)")))
    assert a == b
