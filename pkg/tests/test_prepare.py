from __future__ import annotations

from fractions import Fraction

import mpmath
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from loganalytic.errors import (
    CenterRequired,
    CompositionDomain,
    LogOfVanishing,
    NonPositive,
    OrderExceeded,
    RawYDependence,
    SymbolicCoefficient,
    UnknownFunction,
)
from loganalytic.normalize import (
    PrepEnv,
    eval_ast,
    log_depth,
    log_lift,
    loglog_substitute,
    loglog_unsubstitute,
    parse,
    prepare,
    prepare_text,
    rational_power,
    reciprocal,
)
from loganalytic.numeric import PrecisionCtx, eval_series, eval_with_tail
from loganalytic.scale import ExponentTuple, SimpleCell
from loganalytic.series import GenSeries

from corpus import CORPUS

E = ExponentTuple
C1 = SimpleCell.default(1)


def test_geometric_reciprocal():
    g = GenSeries.build([(1, E((0, 0))), (-1, E((1, 0)))], C1)
    f = reciprocal(g, K=4)
    assert f.as_dict() == {E((k, 0)): 1 for k in range(5)}
    assert f.tail == E((5, 0))
    assert f.cell.upper <= Fraction(1, 2)


def test_intro_example():
    f = prepare_text("y - x/log(y)")
    x = sympy.Symbol("x")
    assert f.as_dict() == {E((1, 0)): 1, E((0, -1)): x}
    assert f.tail is None


def test_log_lift_rules():
    f = GenSeries.build([(2, E((1, 0)))], C1)
    g = log_lift(f, order=2)
    assert g.r == 2
    assert g.as_dict() == {E((0, 0, 0)): sympy.log(2), E((0, 1, 0)): -1}
    h = GenSeries.build([(1, E((0, 3)))], C1)
    assert log_lift(h).as_dict() == {E((0, 0, 1)): 3}
    with pytest.raises(OrderExceeded):
        log_lift(h, order=1)
    with pytest.raises(NonPositive):
        log_lift(GenSeries.build([(-1, E((1, 0)))], C1))
    with pytest.raises(CenterRequired):
        log_lift(GenSeries.build([(sympy.Symbol("x"), E((0, 0)))], C1))


def test_log_of_vanishing_germ():
    with pytest.raises(LogOfVanishing):
        prepare_text("log(y - y)")
    with pytest.raises(LogOfVanishing):
        prepare_text("log(-y)")


def test_order_checks():
    with pytest.raises(OrderExceeded):
        prepare_text("log(log(y))", r=1)
    f = prepare_text("log(y)", r=3)
    assert f.r == 3


def test_fractional_powers():
    f = rational_power(GenSeries.build([(4, E((2, 0)))], C1), Fraction(1, 2))
    assert f.as_dict() == {E((1, 0)): 2}
    with pytest.raises(NonPositive):
        rational_power(GenSeries.build([(-4, E((2, 0)))], C1), Fraction(1, 2))
    g = prepare_text("(1 + y)^^(1/2)", K=3)
    assert g.as_dict() == {E((0,)): 1, E((1,)): Fraction(1, 2), E((2,)): Fraction(-1, 8), E((3,)): Fraction(1, 16)}


def test_composition_errors():
    with pytest.raises(CompositionDomain):
        prepare_text("geom(1 + y)")
    with pytest.raises(CompositionDomain):
        prepare_text("exp(log(y))")
    with pytest.raises(UnknownFunction):
        prepare_text("nosuch(y)")
    with pytest.raises(CompositionDomain):
        prepare_text("sin(y, y)")


def test_composition_at_nonzero_center():
    f = prepare_text("geom(1/2 + y)", K=3)
    assert f.as_dict() == {E((0,)): 2, E((1,)): 4, E((2,)): 8, E((3,)): 16}
    assert f.cell.upper <= Fraction(1, 4)


def test_symbolic_parameters():
    f = prepare_text("x + y")
    assert f.constant_term() == sympy.Symbol("x")
    with pytest.raises(CenterRequired):
        prepare_text("log(x + y)")
    bound = prepare_text("log(x + y)", params={"x": 2})
    assert bound.constant_term() == sympy.log(2)
    with pytest.raises(SymbolicCoefficient):
        prepare_text("1/(1 + x*y)")


def test_loglog_substitution_round_trip():
    f = prepare_text("1/log(y) + 2/log(y)^^2", K=3)
    g = loglog_substitute(f)
    assert g.r == 0
    assert g.as_dict() == {E((1,)): -1, E((2,)): 2}
    back = loglog_unsubstitute(g)
    assert back.as_dict() == f.as_dict()
    with pytest.raises(RawYDependence):
        loglog_substitute(prepare_text("y + 1/log(y)"))


def test_loglog_values_agree():
    f = prepare_text("1/(1 - 1/log(y))", K=6)
    g = loglog_substitute(f)
    with mpmath.workdps(50):
        y = mpmath.mpf("1e-20")
        w = -1 / mpmath.log(y)
        assert g.cell.contains(w)
        assert abs(eval_series(f, y) - eval_series(g, w)) < mpmath.mpf(10) ** -40


@pytest.mark.parametrize("text", CORPUS)
def test_corpus_prepares_and_matches_oracle(text):
    e = parse(text)
    f = prepare(e, PrepEnv.create(log_depth(e)))
    ctx = PrecisionCtx(digits=100, ks=(6, 8, 10))
    with ctx.work():
        for y in ctx.schedule(f.r):
            assert f.cell.contains(y)
            value, _ = eval_with_tail(f, y, ctx)
            truth = eval_ast(e, y)
            assert abs(value - truth) <= mpmath.mpf(10) ** -15 * (1 + abs(truth))


atoms = st.sampled_from(["y", "1", "2", "1/2", "3*y"])


@st.composite
def positive_expressions(draw, depth=2):
    """Expressions whose germ tends to a positive constant or +0 from above."""
    if depth == 0:
        return draw(atoms)
    kind = draw(st.sampled_from(["atom", "add", "mul", "div", "pow", "geom"]))
    sub = lambda: draw(positive_expressions(depth - 1))  # noqa: E731
    if kind == "atom":
        return draw(atoms)
    if kind == "add":
        return f"({sub()} + {sub()})"
    if kind == "mul":
        return f"({sub()} * {sub()})"
    if kind == "div":
        return f"({sub()} / {sub()})"
    if kind == "pow":
        return f"({sub()})^^{draw(st.sampled_from(['2', '-1', '(1/2)', '(-1/3)']))}"
    return "geom(y)"


@settings(max_examples=40, deadline=None)
@given(positive_expressions(), st.booleans())
def test_prepared_series_match_direct_evaluation(text, with_log):
    if with_log:
        text = f"log({text})"
    e = parse(text)
    f = prepare(e, PrepEnv.create(log_depth(e), K=10))
    ctx = PrecisionCtx(digits=60)
    with ctx.work():
        y = mpmath.mpf(10) ** -12
        if not f.cell.contains(y):
            y = f.cell.upper_mpf() * mpmath.mpf(10) ** -12
        value = eval_series(f, y, ctx)
        truth = eval_ast(e, y)
        assert abs(value - truth) <= mpmath.mpf(10) ** -20 * (1 + abs(truth))
