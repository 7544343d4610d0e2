"""Acceptance checks, one ``criterion`` marker per requirement.

Run with ``pytest tests/test_acceptance.py -v``; the terminal summary prints
one PASS/FAIL line per criterion.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

import mpmath
import pytest
import sympy
from corpus import CORPUS

from loganalytic.calculus import (
    classify,
    flatness_bound,
    germ_equal_zero,
    series_derivative,
    split_series,
    taylor_split,
)
from loganalytic.errors import InvalidUnit, NoDominantTerm
from loganalytic.monomial import LimitKind, LogMonomial, mono_derivative, mono_eval, mono_limit, shrink_for_bound
from loganalytic.normalize import PrepEnv, eval_ast, log_depth, parse, prepare, prepare_text
from loganalytic.numeric import (
    PrecisionCtx,
    analytic_evaluator,
    eval_series,
    fd_derivative,
    limit_probe,
    prepared_evaluator,
)
from loganalytic.scale import ExponentTuple, SimpleCell, q_diff
from loganalytic.series import GenSeries, PreparedForm, SpecialUnit, expand_unit, factor_prepared

E = ExponentTuple

# every nonzero exponent tuple with entries in {-2, ..., 2} at order 2
GRID = [E(q) for q in itertools.product(range(-2, 3), repeat=3) if any(q)]


def test_grid_size():
    assert len(GRID) == 124


# -- 1: limit table against sampling -------------------------------------------------


@pytest.mark.criterion("1 monomial limit table matches sampled trends (124 tuples, r=2)")
def test_limit_table_matches_sampling():
    ctx = PrecisionCtx(digits=200, ks=(1, 2, 3, 4, 5))
    cell = SimpleCell.default(2)
    # the order-3 schedule is exactly y_k = exp(-e - exp(k)); every point lies in the order-2 cell
    with ctx.work():
        points = ctx.schedule(3)
        expected_points = [mpmath.exp(-mpmath.e - mpmath.exp(k)) for k in ctx.ks]
        assert all(abs(a - b) <= abs(b) * mpmath.mpf(10) ** -190 for a, b in zip(points, expected_points))
        assert all(cell.contains(y) for y in points)
    symbolic_to_trend = {LimitKind.ZERO: "zero", LimitKind.POS_INF: "+inf", LimitKind.NEG_INF: "-inf"}
    mismatches = []
    for q in GRID:
        m = LogMonomial(1, q, cell)
        trend = limit_probe(lambda y: mono_eval(m, y), 3, ctx)
        kind = mono_limit(q).kind
        if kind is LimitKind.FINITE:
            ok = trend.kind == "plateau"
        else:
            ok = trend.kind == symbolic_to_trend[kind]
        if not ok:
            mismatches.append((q, kind, trend.kind))
    assert not mismatches


# -- 2: derivative exactness ---------------------------------------------------------------


@pytest.mark.criterion("2 dominant term of the monomial derivative is exact")
def test_derivative_dominant_term_exact():
    cell = SimpleCell.default(2)
    for q in GRID:
        terms = mono_derivative(LogMonomial(1, q, cell))
        top = max(terms, key=lambda m: m.exp.dominance_key())
        j = next(i for i, e in enumerate(q) if e != 0)
        assert top.exp == q_diff(q)
        assert abs(top.coeff) == abs(q[j])
        assert isinstance(top.coeff, Fraction)


# -- 3: derivatives of random prepared forms -------------------------------------------

UNIT_FUNCTIONS = {
    1: ["1/(1 - t1)", "exp(t1)", "sqrt(1 + t1)", "1 + log(1 + t1)"],
    2: ["1/(1 - t1 - t2)", "exp(t1)*sqrt(1 + t2)", "1/((1 - t1)*(1 + t2))"],
}
SAMPLE_Y = Fraction(1, 100)


def _rational(rng: random.Random, lo: int, hi: int) -> Fraction:
    den = rng.choice([1, 2, 3, 4])
    return Fraction(rng.randint(lo * den, hi * den), den)


def _exponent(rng: random.Random, r: int) -> ExponentTuple:
    return E(_rational(rng, -2, 2) for _ in range(r + 1))


def _vanishing_exponent(rng: random.Random, r: int) -> ExponentTuple:
    while True:
        p = _exponent(rng, r)
        if not p.is_zero() and mono_limit(p).kind is LimitKind.ZERO:
            return p


def _random_prepared(rng: random.Random) -> PreparedForm | None:
    """One candidate, or ``None`` when the cell would exclude ``y = 0.01``."""
    r = rng.randint(0, 2)
    cell = SimpleCell.default(r) if r else SimpleCell(0, Fraction(1, 2))
    a = _rational(rng, -3, 3) or Fraction(1)
    q = _exponent(rng, r)
    s = rng.randint(1 if q.is_zero() else 0, 2)
    polynomial = s == 0 or rng.random() < 0.5
    # analytic units are truncated at degree 8, so keep their bases small at y = 0.01
    bound = 0.5 if polynomial else 0.04
    bases = []
    for _ in range(s):
        b = _rational(rng, -1, 1) or Fraction(1, 2)
        p = _vanishing_exponent(rng, r)
        cell = shrink_for_bound([(b, p)], cell, bound)
        bases.append((b, p))
    if not cell.contains(SAMPLE_Y):
        return None
    try:
        if polynomial:
            poly = {(0,) * s: Fraction(1)}
            for alpha in itertools.product(range(3), repeat=s):
                if 0 < sum(alpha) <= 3:
                    poly[alpha] = _rational(rng, -1, 1)
            unit = SpecialUnit(tuple(bases), cell, poly=poly)
        else:
            unit = SpecialUnit.from_function(rng.choice(UNIT_FUNCTIONS[s]), bases, cell, degree=8)
    except InvalidUnit:
        return None
    return PreparedForm(a, q, unit)


@pytest.mark.criterion("3 symbolic derivative of 50 random prepared forms matches finite differences")
def test_random_prepared_derivatives():
    rng = random.Random(20240611)
    ctx = PrecisionCtx(digits=100)
    cases = 0
    while cases < 50:
        p = _random_prepared(rng)
        if p is None:
            continue
        cases += 1
        df = series_derivative(expand_unit(p, K=8))
        with ctx.work():
            symbolic = eval_series(df, SAMPLE_Y, ctx)
            numeric = fd_derivative(prepared_evaluator(p), SAMPLE_Y, 1, ctx)
            err = abs(symbolic - numeric) / abs(numeric)
        assert err <= mpmath.mpf(10) ** -8, (p, mpmath.nstr(err, 5))
    assert cases == 50


# -- 4: Taylor coefficients of the geometric form ----------------------------------------


def geometric_form() -> PreparedForm:
    unit = SpecialUnit.from_function("1/(1 - t1)", [(Fraction(1, 2), E((1, 0)))], SimpleCell.default(1))
    return PreparedForm(1, E((1, 0)), unit)


@pytest.mark.criterion("4 Taylor coefficients of the geometric form, exact and against finite differences")
def test_geometric_taylor_coefficients():
    p = geometric_form()
    split = taylor_split(p, 6)
    assert (split.d(1), split.d(2), split.d(3)) == (Fraction(1), Fraction(1, 2), Fraction(1, 4))
    assert not split.singular_part.terms
    ctx = PrecisionCtx(digits=100)
    fn = analytic_evaluator(p)
    with ctx.work():
        # the extension agrees with the cell evaluator where both are defined
        y = mpmath.mpf("0.01")
        assert abs(fn(y) - prepared_evaluator(p)(y)) <= mpmath.mpf(10) ** -90
        for k in range(1, 7):
            expected = mpmath.factorial(k) * split.d(k).numerator / mpmath.mpf(split.d(k).denominator)
            got = fd_derivative(fn, 0, k, ctx)
            assert abs(got - expected) <= mpmath.mpf(10) ** -10 * abs(expected)


# -- 5: intro example ------------------------------------------------------------------------


@pytest.mark.criterion("5 y - x/log(y) behaves like -1/log(y) and is C^0 but not analytic")
def test_intro_example_asymptotics():
    f = prepare_text("y - x/log(y)", params={"x": 1})
    with mpmath.workdps(100):
        y = mpmath.mpf("1e-8")
        scaled = eval_series(f, y) * abs(mpmath.log(y))
        assert abs(scaled - 1) <= mpmath.mpf(10) ** -6
        assert abs(eval_series(f, y) - eval_ast(parse("y - 1/log(y)"), y)) <= mpmath.mpf(10) ** -90
    rep = classify(f)
    assert rep.max_C_order == 0
    assert rep.analytic_at_0 is False


# -- 6: flatness ---------------------------------------------------------------------------------


@pytest.mark.criterion("6 flatness bound of y^(5/2) and the growth of its derivatives")
def test_flatness_of_power():
    p = factor_prepared(prepare_text("y^^(5/2)"))
    assert flatness_bound(p) == 3
    ctx = PrecisionCtx(digits=100)
    fn = prepared_evaluator(p)
    second = limit_probe(lambda y: fd_derivative(fn, y, 2, ctx), 0, ctx)
    third = limit_probe(lambda y: fd_derivative(fn, y, 3, ctx), 0, ctx)
    assert second.kind == "zero"
    assert third.kind == "+inf"
    with ctx.work():
        y = mpmath.mpf("1e-6")
        ratio = fd_derivative(fn, y, 3, ctx) / (mpmath.mpf(15) / 8 * y ** mpmath.mpf(-0.5))
        assert abs(ratio - 1) <= mpmath.mpf("0.1")


# -- 7: corpus round trip --------------------------------------------------------------------


@pytest.mark.criterion("7 prepared corpus agrees with direct evaluation to 1e-20")
@pytest.mark.parametrize("text", CORPUS)
def test_corpus_round_trip(text):
    e = parse(text)
    f = prepare(e, PrepEnv.create(log_depth(e)))
    ctx = PrecisionCtx(digits=200, ks=tuple(range(4, 14)))
    with ctx.work():
        points = ctx.schedule(f.r)
        assert len(points) == 10
        for y in points:
            assert f.cell.contains(y)
            truth = eval_ast(e, y)
            value = eval_series(f, y, ctx)
            assert abs(value - truth) <= mpmath.mpf(10) ** -20 * abs(truth), text


def test_corpus_shape():
    assert len(CORPUS) == 20
    assert max(log_depth(parse(t)) for t in CORPUS) == 3


# -- 8: the boundary example --------------------------------------------------------------------


@pytest.mark.criterion("8 boundary example prepares as a series but has no single-unit form")
def test_boundary_example():
    f = prepare_text("-1/log(y/(1+y)) - x")
    x = sympy.Symbol("x")
    assert f.constant_term() == -x
    _, singular = split_series(f)
    assert singular.terms[0].exp == E((0, -1))
    with pytest.raises(NoDominantTerm):
        factor_prepared(f)


# -- 9: identically vanishing germs -------------------------------------------------------------


def _random_items(rng: random.Random, r: int, n: int):
    return [(_rational(rng, -5, 5) or Fraction(1), _exponent(rng, r)) for _ in range(n)]


@pytest.mark.criterion("9 germ_equal_zero decides build-then-subtract round trips and tiny perturbations")
def test_quasianalytic_zero_test():
    rng = random.Random(7)
    for _ in range(100):
        r = rng.randint(0, 3)
        cell = SimpleCell.default(r) if r else SimpleCell(0, Fraction(1))
        items = _random_items(rng, r, rng.randint(1, 8))
        f = GenSeries.build(items, cell)
        # rebuild the same germ from a different decomposition: split every coefficient in two
        cut = [(_rational(rng, -3, 3), q) for _, q in items]
        g = GenSeries.build(cut, cell) + GenSeries.build([(c - d, q) for (c, q), (d, _) in zip(items, cut)], cell)
        rng.shuffle(items)
        h = GenSeries.build(items, cell)
        assert germ_equal_zero(g - f)
        assert germ_equal_zero(h - g)
        assert (g - f).terms == ()
        q = _exponent(rng, r)
        bump = GenSeries.monomial(Fraction(rng.choice([-1, 1]), 10**9), q, cell)
        assert not germ_equal_zero((g + bump) - f)
        assert not germ_equal_zero(g - (f + bump))
