from __future__ import annotations

import itertools
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from loganalytic.errors import DomainViolation, LengthMismatch
from loganalytic.monomial import (
    Dominance,
    LimitKind,
    LogMonomial,
    dominance_cmp,
    dominates,
    mono_derivative,
    mono_eval,
    mono_limit,
    shrink_for_bound,
    sup_abs,
)
from loganalytic.numeric import PrecisionCtx, fd_derivative, limit_probe
from loganalytic.scale import ExponentTuple, SimpleCell, q_diff

E = ExponentTuple
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)


def exponents(r):
    return st.lists(rationals, min_size=r + 1, max_size=r + 1).map(ExponentTuple)


def test_mono_eval_examples():
    with mpmath.workdps(50):
        c0 = SimpleCell(0, None)
        assert mono_eval(LogMonomial(1, E((Fraction(1, 2),)), c0), Fraction(1, 4)) == mpmath.mpf("0.5")
        c1 = SimpleCell.default(1)
        v = mono_eval(LogMonomial(1, E((0, 1)), c1), mpmath.exp(-2))
        assert abs(v - 2) < mpmath.mpf(10) ** -45
        v = mono_eval(LogMonomial(3, E((1, 1)), c1), mpmath.exp(-1))
        assert abs(v - 3 * mpmath.exp(-1)) < mpmath.mpf(10) ** -45
        assert mpmath.nstr(v, 8) == "1.1036383"


def test_mono_eval_outside_cell():
    with pytest.raises(DomainViolation):
        mono_eval(LogMonomial(1, E((0, 1)), SimpleCell(1, Fraction(1, 2))), Fraction(3, 4))


def test_mono_limit_table():
    assert mono_limit(E((1, 0))).kind is LimitKind.ZERO
    assert mono_limit(E((0, 2))).kind is LimitKind.POS_INF
    assert mono_limit(E((-1, 5))).kind is LimitKind.POS_INF
    assert mono_limit(E((0, -1, 9))).kind is LimitKind.ZERO
    zero = mono_limit(E((0, 0, 0)))
    assert zero.kind is LimitKind.FINITE and zero.value == 1


def test_dominance_examples():
    assert dominance_cmp(E((1, 0)), E((0, -1))) is Dominance.SMALLER
    assert dominance_cmp(E((0, 3, -1)), E((0, 3, -1))) is Dominance.EQUAL
    assert dominance_cmp(E((0, 1)), E((0, 0))) is Dominance.LARGER
    with pytest.raises(LengthMismatch):
        dominance_cmp(E((0, 1)), E((0,)))


def test_dominance_against_sampling():
    # y = o(1/|log y|): the ratio tends to 0 along the schedule
    cell = SimpleCell.default(1)
    ratio = LogMonomial(1, E((1, 0)) - E((0, -1)), cell)
    trend = limit_probe(lambda y: mono_eval(ratio, y), 1)
    assert trend.kind == "zero"


@settings(max_examples=200)
@given(st.data())
def test_dominance_is_a_total_order(data):
    r = data.draw(st.integers(0, 3))
    a, b, c, s = (data.draw(exponents(r)) for _ in range(4))
    ab, ba = dominance_cmp(a, b), dominance_cmp(b, a)
    flip = {Dominance.SMALLER: Dominance.LARGER, Dominance.LARGER: Dominance.SMALLER, Dominance.EQUAL: Dominance.EQUAL}
    assert ba is flip[ab]
    assert (ab is Dominance.EQUAL) == (a == b)
    if ab is Dominance.SMALLER and dominance_cmp(b, c) is Dominance.SMALLER:
        assert dominance_cmp(a, c) is Dominance.SMALLER
    assert dominance_cmp(a + s, b + s) is ab
    assert dominates(a, b) == (ab is Dominance.LARGER)


def test_mono_derivative_examples():
    c2 = SimpleCell.default(2)
    (d,) = mono_derivative(LogMonomial(1, E((0, 1, 0)), c2))
    assert d.coeff == -1 and d.exp == E((-1, 0, 0))
    (d,) = mono_derivative(LogMonomial(1, E((0, 0, 1)), c2))
    assert d.coeff == -1 and d.exp == E((-1, -1, 0))
    (d,) = mono_derivative(LogMonomial(1, E((0, 3)), SimpleCell.default(1)))
    assert d.coeff == -3 and d.exp == E((-1, 2)) == q_diff(E((0, 3)))
    assert mono_derivative(LogMonomial(5, E((0, 0)), SimpleCell.default(1))) == []


@settings(max_examples=150)
@given(st.data())
def test_derivative_dominant_term_is_exact(data):
    r = data.draw(st.integers(0, 3))
    q = data.draw(exponents(r))
    c = data.draw(st.fractions(min_value=-5, max_value=5, max_denominator=5).filter(bool))
    if q.is_zero():
        return
    terms = mono_derivative(LogMonomial(c, q, SimpleCell.default(r)))
    top = max(terms, key=lambda m: m.exp.dominance_key())
    j = next(i for i, e in enumerate(q) if e)
    assert top.exp == q_diff(q)
    assert abs(top.coeff) == abs(q[j]) * abs(c)


@settings(max_examples=25, deadline=None)
@given(st.data())
def test_derivative_matches_finite_differences(data):
    r = data.draw(st.integers(0, 2))
    q = data.draw(exponents(r))
    cell = SimpleCell.default(r) if r else SimpleCell(0, Fraction(1, 2))
    m = LogMonomial(1, q, cell)
    terms = mono_derivative(m)
    ctx = PrecisionCtx(digits=100)
    y = Fraction(1, 100)
    with ctx.work():
        fd = fd_derivative(lambda t: mono_eval(m, t), y, 1, ctx)
        exact = sum((mono_eval(t, y) for t in terms), mpmath.mpf(0))
        assert abs(fd - exact) / max(1, abs(exact)) <= mpmath.mpf(10) ** -8


@settings(max_examples=60)
@given(st.data())
def test_product_rule(data):
    r = data.draw(st.integers(0, 2))
    cell = SimpleCell.default(r)
    m1 = LogMonomial(data.draw(rationals.filter(bool)), data.draw(exponents(r)), cell)
    m2 = LogMonomial(data.draw(rationals.filter(bool)), data.draw(exponents(r)), cell)

    def merged(monos):
        out = {}
        for m in monos:
            out[m.exp] = out.get(m.exp, 0) + m.coeff
        return {q: c for q, c in out.items() if c}

    left = merged(mono_derivative(m1 * m2))
    right = merged([d * m2 for d in mono_derivative(m1)] + [m1 * d for d in mono_derivative(m2)])
    assert left == right


GRID = [E(q) for q in itertools.product([-2, 0, 2], repeat=3) if any(q)]


@pytest.mark.parametrize("q", GRID, ids=str)
def test_limit_matches_sampled_trend(q):
    cell = SimpleCell.default(2)
    m = LogMonomial(1, q, cell)
    trend = limit_probe(lambda y: mono_eval(m, y), 2)
    expected = {LimitKind.ZERO: "zero", LimitKind.POS_INF: "+inf"}[mono_limit(q).kind]
    assert trend.kind == expected


def test_sup_abs_and_shrinking():
    cell = SimpleCell.default(1)
    terms = [(Fraction(5, 3), E((0, -1)))]
    # 5/(3|log y|) is largest at the right end of the cell
    assert sup_abs(terms, cell) > 1
    small = shrink_for_bound(terms, cell, 0.5)
    assert small.upper < cell.upper
    assert sup_abs(terms, small) <= 0.5
    with mpmath.workdps(30):
        # the bound is nearly tight: log(upper) is close to -10/3
        assert abs(mpmath.log(small.upper_mpf()) + mpmath.mpf(10) / 3) < 1e-3


def test_shrinking_requires_vanishing_monomials():
    with pytest.raises(DomainViolation):
        shrink_for_bound([(1, E((0, 1)))], SimpleCell.default(1), 0.5)


def test_sup_abs_on_unbounded_cell():
    assert sup_abs([(1, E((1,)))], SimpleCell(0, None)) == float("inf")
    assert sup_abs([(1, E((1,)))], SimpleCell(0, Fraction(1, 4))) == pytest.approx(0.25)
