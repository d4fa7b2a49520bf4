"""Defect enumeration, classification, and census counts."""

import itertools
from collections import Counter
from fractions import Fraction

import pytest

from cubecount import hypercube as hc
from cubecount import polymers as pm
from cubecount.errors import BudgetExceededError


def brute_force_supports(d: int, max_size: int) -> set:
    """Connected odd subsets obeying the closure bound, by definition."""
    out = set()
    half = hc.n_side(d) // 2
    for m in range(1, max_size + 1):
        for subset in itertools.combinations(hc.odd_side(d), m):
            if len(hc.square_components(subset, d)) != 1:
                continue
            if len(hc.closure(subset, d)) > half:
                continue
            out.add(subset)
    return out


def test_q3_admits_only_singletons():
    polys = pm.enumerate_polymers(3, 3)
    assert len(polys) == 4
    assert all(p.size == 1 for p in polys)
    assert {p.support[0] for p in polys} == set(hc.odd_side(3))


def test_enumeration_matches_brute_force_d4():
    for max_size in (1, 2, 3):
        expect = brute_force_supports(4, max_size)
        got = {p.support for p in pm.enumerate_polymers(4, max_size)}
        assert got == expect


def test_d4_size_histogram_frozen():
    polys = pm.enumerate_polymers(4, 8)
    hist = sorted(Counter(p.size for p in polys).items())
    assert hist == [(1, 8), (2, 24), (3, 32), (4, 8)]


def test_rooted_counts_scale_by_transitivity():
    # supports of size m containing a fixed vertex: m/N of the global list
    d = 4
    n = hc.n_side(d)
    global_hist = Counter(p.size for p in pm.enumerate_polymers(d, 4))
    rooted_hist = Counter(p.size for p in pm.enumerate_polymers(d, 4, rooted=True))
    for m, total in global_hist.items():
        assert rooted_hist[m] * n == total * m


def test_polymer_weight_formula():
    p = pm.enumerate_polymers(4, 1)[0]
    lam = Fraction(1, 20)
    assert p.nbhd_size == 4
    assert p.weight(lam) == lam / (1 + lam) ** 4


def test_classify_singleton_and_key_round_trip():
    t = pm.classify([1], 4)
    assert t.key == "s1c0g0"
    assert pm.DefectType.from_key(t.key) == t
    pair = pm.classify([1, 2], 4)
    assert pm.DefectType.from_key(pair.key) == pair


def test_from_key_rejects_malformed_input():
    for bad in ("", "s1c0", "x1c0g0", "s1c0gZZ", "s-1c0g0"):
        with pytest.raises(ValueError):
            pm.DefectType.from_key(bad)


def test_classification_caps_at_supported_size():
    with pytest.raises(ValueError):
        pm.classify(hc.odd_side(5)[:8], 5)


def test_type_invariant_under_coordinate_relabeling():
    # swapping two coordinates is a cube automorphism fixing parity
    d = 4

    def swap01(v: int) -> int:
        b0, b1 = v & 1, (v >> 1) & 1
        return (v & ~3) | (b0 << 1) | b1

    for p in pm.enumerate_polymers(d, 3):
        image = [swap01(v) for v in p.support]
        assert pm.classify(image, d) == p.type


def test_census_d4_frozen_and_consistent_with_enumeration():
    cen = pm.census(4, 2)
    assert [(e.type.key, e.count) for e in cen.entries] == [
        ("s1c0g0", 8), ("s2c2g1", 24)]
    by_type = Counter(p.type.key for p in pm.enumerate_polymers(4, 2))
    assert dict(by_type) == {e.type.key: e.count for e in cen.entries}


def test_census_json_round_trip():
    cen = pm.census(4, 3)
    assert pm.Census.from_json(cen.to_json()) == cen


def test_budget_exhaustion_raises():
    with pytest.raises(BudgetExceededError):
        pm.census(9, 3, budget=5)


def test_symbolic_census_evaluates_to_global_counts():
    # entries hold n_T(d) / n_side as polynomials in d
    sym = pm.symbolic_census(3)
    d = 7
    cen = pm.census(d, 3).by_key()
    for t, poly in sym.entries:
        assert poly.eval({"d": Fraction(d)}) * hc.n_side(d) == cen[t.key].count
    assert {t.key for t, _ in sym.entries} == set(cen)
