"""Exact polynomial / rational-function / truncated-series kernel."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cubecount.errors import InterpolationError
from cubecount.symbolic import (
    BETA,
    RatFunc,
    RatPoly,
    TruncSeries,
    binom_poly,
    divide_out_beta,
    divide_out_one_minus_beta,
    interpolate_poly,
    log_ratio_expand,
    neg_binomial_expand,
    poly_on_series,
    poly_to_json_str,
)

beta = RatPoly.var(BETA)
d_var = RatPoly.var("d")


# -- random polynomial strategy ----------------------------------------------

fracs = st.fractions(min_value=-4, max_value=4, max_denominator=6)


@st.composite
def polys(draw):
    nterms = draw(st.integers(0, 4))
    terms = {}
    for _ in range(nterms):
        e = (draw(st.integers(0, 3)), draw(st.integers(0, 3)))
        terms[e] = terms.get(e, 0) + draw(fracs)
    return RatPoly(("beta", "d"), terms)


@given(polys(), polys(), polys())
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p + RatPoly.const(0) == p
    assert p * RatPoly.const(1) == p
    assert p - p == RatPoly.const(0)


@given(polys(), polys(), fracs, fracs)
@settings(max_examples=60, deadline=None)
def test_eval_is_a_homomorphism(p, q, x, y):
    pt = {"beta": x, "d": y}
    assert (p + q).eval(pt) == p.eval(pt) + q.eval(pt)
    assert (p * q).eval(pt) == p.eval(pt) * q.eval(pt)


@given(polys())
@settings(max_examples=60, deadline=None)
def test_poly_json_round_trip(p):
    assert RatPoly.from_json(p.to_json()) == p
    assert poly_to_json_str(p) == poly_to_json_str(RatPoly.from_json(p.to_json()))


def test_binomial_square():
    assert (1 + beta) ** 2 == 1 + 2 * beta + beta * beta


def test_subs_partial_evaluation():
    p = beta ** 2 * d_var + 3 * beta
    q = p.subs({"d": Fraction(5)})
    assert q == 5 * beta ** 2 + 3 * beta
    assert q.eval({BETA: Fraction(1, 2)}) == Fraction(11, 4)


def test_divide_out_one_minus_beta_exact_and_refusal():
    q = 2 + beta + 3 * beta ** 2
    assert divide_out_one_minus_beta((1 - beta) * q) == q
    assert divide_out_one_minus_beta(1 + beta) is None


def test_divide_out_beta_exact_and_refusal():
    q = 5 - beta ** 3
    assert divide_out_beta(beta * q) == q
    assert divide_out_beta(1 + beta) is None


def test_ratfunc_normalizes_common_factors():
    f = RatFunc(beta * (1 - beta) * 7, bpow=1, opow=1)
    assert f == RatFunc.const(7)
    g = RatFunc(beta ** 2, bpow=1)
    assert g == RatFunc(beta)


def test_ratfunc_arithmetic_at_a_point():
    f = RatFunc(beta, opow=1)  # beta/(1-beta)
    g = RatFunc(1 - beta, bpow=1)  # (1-beta)/beta
    b = Fraction(1, 3)
    prod = f * g
    assert prod == RatFunc.const(1)
    s = f + g
    assert s.eval({BETA: b}) == b / (1 - b) + (1 - b) / b


def test_ratfunc_json_round_trip():
    f = RatFunc(beta ** 2 * d_var - 1, bpow=2, opow=3)
    assert RatFunc.from_json(f.to_json()) == f


def test_series_multiplication_truncates_and_flags_drops():
    # (1 + Y)(1 + Y) at order 2 drops the Y^2 term
    one_plus = TruncSeries.from_coeffs([1, 1], order=2)
    sq = one_plus * one_plus
    assert sq.coefficient(0) == RatFunc.const(1)
    assert sq.coefficient(1) == RatFunc.const(2)
    assert sq.dropped
    # at order 3 nothing is lost
    full = TruncSeries.from_coeffs([1, 1], order=3) * TruncSeries.from_coeffs([1, 1], order=3)
    assert not full.dropped
    assert full.coefficient(2) == RatFunc.const(1)


def test_poly_on_series_substitutes_the_variable():
    p = RatPoly.var("Y") ** 2 + 2 * RatPoly.var("Y") + 1
    y = TruncSeries.from_coeffs([0, 1], order=3)
    out = poly_on_series(p, "Y", y)
    assert out.coefficient(0) == RatFunc.const(1)
    assert out.coefficient(1) == RatFunc.const(2)
    assert out.coefficient(2) == RatFunc.const(1)


def test_binom_poly_matches_falling_product():
    k = RatPoly.var("k")
    # C(-k, 2) = k(k+1)/2
    assert binom_poly(k, 2) == (k * k + k) * Fraction(1, 2)
    assert binom_poly(k, 0) == RatPoly.const(1)


def test_neg_binomial_expand_integer_exponent():
    # (1 + Y)^(-2) = 1 - 2Y + 3Y^2 - 4Y^3 + ...
    y = TruncSeries.from_coeffs([0, 1], order=4)
    out = neg_binomial_expand(RatPoly.const(2), y, r=3)
    for j, c in enumerate([1, -2, 3, -4]):
        assert out.coefficient(j) == RatFunc.const(c)


def test_neg_binomial_expand_rejects_constant_term():
    y = TruncSeries.from_coeffs([1, 1], order=3)
    with pytest.raises(ValueError):
        neg_binomial_expand(RatPoly.const(1), y, r=2)


def test_log_ratio_expand_leading_coefficients():
    # log(1+x) - beta log(1+x/beta): linear term cancels, quadratic
    # coefficient is (1-beta)/(2 beta)... with sign -(1-1/beta)/2.
    x = TruncSeries.from_coeffs([0, 1], order=3)
    out = log_ratio_expand(x, t=3)
    assert out.coefficient(0).is_zero()
    assert out.coefficient(1).is_zero()
    b = Fraction(1, 3)
    expect = -(1 - 1 / b) / 2
    assert out.coefficient(2).eval({BETA: b}) == expect


def test_interpolation_recovers_polynomial():
    target = d_var ** 2 * 3 - d_var * Fraction(1, 2) + 7
    pts = [(x, target.eval({"d": Fraction(x)})) for x in (2, 3, 4, 5, 6)]
    assert interpolate_poly(pts, degree_bound=2) == target


def test_interpolation_rejects_inconsistent_points():
    pts = [(1, 1), (2, 4), (3, 9), (4, 99)]
    with pytest.raises(InterpolationError):
        interpolate_poly(pts, degree_bound=2)


def test_interpolation_needs_a_check_point():
    with pytest.raises(ValueError):
        interpolate_poly([(1, 1), (2, 4), (3, 9)], degree_bound=2)
