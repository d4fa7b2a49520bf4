"""Fast exact binomial coefficients."""

import math

import pytest

from cubecount import bigint


def test_matches_math_comb_exhaustively():
    for n in range(0, 60):
        for k in range(0, n + 1):
            assert bigint.binomial(n, k) == math.comb(n, k)


def test_edge_cases():
    assert bigint.binomial(10, 11) == 0
    assert bigint.binomial(0, 0) == 1
    with pytest.raises(ValueError):
        bigint.binomial(-1, 0)
    with pytest.raises(ValueError):
        bigint.binomial(5, -2)


def test_prime_factorization_path_matches_math_comb(monkeypatch):
    # force the large-n path even for small inputs
    monkeypatch.setattr(bigint, "_SMALL_CUTOFF", 0)
    for n in (1, 2, 37, 96, 255):
        for k in (0, 1, n // 3, n // 2, n):
            assert bigint.binomial(n, k) == math.comb(n, k)


def test_large_argument_spot_checks():
    assert bigint.binomial(10 ** 5, 2) == math.comb(10 ** 5, 2)
    n, k = 120_000, 31_337
    assert bigint.binomial(n, k) == math.comb(n, k)
