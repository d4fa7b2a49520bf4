"""Series coefficients and high-precision counting formulas."""

import math
import warnings
from fractions import Fraction

import mpmath
import pytest

from cubecount import asymptotics as asym
from cubecount import exact as ex
from cubecount.errors import RegimeWarning
from cubecount.polymers import DefectType
from cubecount.symbolic import RatFunc, RatPoly

lam = RatPoly.var("lam")
dim = RatPoly.var("d")
beta = RatPoly.var("beta")


def test_r1_is_the_bare_fugacity():
    assert asym.R_poly(1) == lam


def test_r2_closed_form():
    expect = ((2 * lam ** 3 + lam ** 4) * dim * (dim - 1) - 2 * lam ** 2) * Fraction(1, 4)
    assert asym.R_poly(2) == expect


def test_r_table_contents_and_json():
    table = asym.R_table(2)
    assert table.kind == "R"
    assert table[1] == asym.R_poly(1)
    assert table[2] == asym.R_poly(2)
    entries = table.to_json()
    assert [e["j"] for e in entries] == [1, 2]
    assert all(e["kind"] == "R" and "text" in e for e in entries)
    assert RatPoly.from_json(entries[1]["poly"]) == asym.R_poly(2)


def test_r_polynomials_match_stratum_sums_numerically():
    # R_j evaluated at (lam, d) must reproduce the per-site stratum sum
    from cubecount import clusters as cl
    from cubecount import hypercube as hc

    d, x = 5, Fraction(1, 9)
    for j in (1, 2, 3):
        per_site = cl.stratum_value(d, j, x) / hc.n_side(d)
        # strata carry (1+lam)^{-jd}; R_j absorbs it as a polynomial identity
        assert asym.R_poly(j).eval({"lam": x, "d": Fraction(d)}) == \
            per_site * (1 + x) ** (j * d)


def test_b1_closed_form():
    table = asym.compute_B(1)
    expect = RatFunc(beta * (dim * beta - 1), opow=3)
    assert table[1] == expect


def test_p1_closed_form():
    table = asym.compute_P(1)
    assert table[1] == RatFunc(beta, opow=1)


def test_p2_closed_form():
    # cross-multiplied comparison keeps everything polynomial
    table = asym.compute_P(2)
    got = table[2]
    num = (dim * (dim - 1) * (2 - beta) * beta ** 3 * Fraction(1, 4)
           - (1 - beta) ** 2 * beta ** 2 * Fraction(1, 2)) * (1 - beta) ** 3 \
        - beta * (1 - dim * beta) ** 2 * Fraction(1, 2) * (1 - beta) ** 4
    expect = RatFunc(num, opow=7)
    assert got == expect


def test_lambda_beta_low_order_is_odds_ratio():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        lb = asym.lambda_beta(Fraction(1, 2), 4, 1)
    assert lb.value == 1
    assert lb.r == 0 and lb.terms == ()


def test_lambda_beta_correction_term():
    b, d = Fraction(1, 4), 12
    lb = asym.lambda_beta(b, d, 4)
    assert lb.r == 1
    base = b / (1 - b)
    corr = (b * (d * b - 1) / (1 - b) ** 3) * (1 - b) ** d
    assert lb.value == base + corr
    assert lb.terms == ((1, corr),)


def test_lambda_beta_warns_below_regime_boundary():
    with pytest.warns(RegimeWarning):
        asym.lambda_beta(Fraction(1, 10), 8, 2)


def test_lambda_beta_validates_inputs():
    with pytest.raises(ValueError):
        asym.lambda_beta(Fraction(0), 4, 2)
    with pytest.raises(ValueError):
        asym.lambda_beta(Fraction(1, 2), 4, 0)


def test_log_z_asymptotic_approaches_exact_small_d():
    hx = ex.hardcore_exact(5, Fraction(1))
    target = math.log(hx.z)
    errs = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        for t in (1, 2, 3):
            lc = asym.log_Z_asymptotic(Fraction(1), 5, t)
            errs.append(abs(float(lc.value) - target))
    # d = 5 sits far from the asymptotic regime; improvement is still monotone
    assert errs[2] < errs[1] < errs[0]
    assert errs[2] < 0.1


def test_log_count_asymptotic_matches_exact_profile():
    # d = 5, beta = 1/2: exact ln i_8(Q_5) vs the order-2 formula
    sp = ex.size_profile(5)
    target = math.log(sp.counts[8])
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        lc = asym.log_count_asymptotic(Fraction(1, 2), 5, 2)
    assert abs(float(lc.value) - target) < 0.05
    obj = lc.to_json()
    assert set(obj) >= {"log10_value", "ln_value", "precision", "terms", "alt_ln_value"}
    # the secondary evaluation path agrees to the order's own accuracy
    assert abs(float(lc.alt) - target) < 0.05


def test_stirling_binom_ratio():
    # leading-order Stirling: relative error O(1/n)
    for n, tol in ((200, 5e-3), (20000, 5e-5)):
        m = round(n * 0.35)
        exact = math.comb(n, m)
        approx = asym.stirling_binom(n, m)
        with mpmath.workdps(40):
            ratio = approx / mpmath.mpf(exact)
        assert abs(float(ratio) - 1) < tol


def test_binomial_lclt_peak_matches_density():
    n = 10 ** 4
    exact, density = asym.binomial_lclt(n, Fraction(1, 2), n // 2)
    assert abs(float(exact) / float(density) - 1) < 1e-3


def test_binomial_lclt_validates_inputs():
    with pytest.raises(ValueError):
        asym.binomial_lclt(10, Fraction(1), 5)
    with pytest.raises(ValueError):
        asym.binomial_lclt(10, Fraction(1, 2), 11)


def test_structured_count_splits_off_fixed_types():
    # pinning zero defects of every size-1..3 type must stay below the
    # unrestricted count; both are finite and positive
    b, d = Fraction(1, 4), 10
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RegimeWarning)
        free = asym.log_count_asymptotic(b, d, 2)
        pinned = asym.structured_count(b, d, fixed_types={DefectType.from_key("s1c0g0"): 0},
                                       diverging_types={}, t=2)
    assert float(pinned.value) < float(free.value)
    assert float(pinned.value) > 0


def test_caches_cleared_results_stable():
    before = asym.R_poly(2)
    asym.clear_caches()
    assert asym.R_poly(2) == before
