"""Fast exact binomial coefficients for very large arguments.

math.comb is quadratic-ish once the operands reach hundreds of thousands of
bits; counting formulas here need binomial(N, beta*N) with N up to 2^23.
Factoring the coefficient by Legendre's prime-exponent formula and multiplying
the prime powers back with a balanced product tree keeps every intermediate
small until the end, which is orders of magnitude faster at this scale.
"""

from __future__ import annotations

import math

_SMALL_CUTOFF = 10_000


def _primes_upto(n: int) -> list[int]:
    if n < 2:
        return []
    sieve = bytearray([1]) * (n + 1)
    sieve[0] = sieve[1] = 0
    for p in range(2, math.isqrt(n) + 1):
        if sieve[p]:
            sieve[p * p:: p] = bytearray(len(sieve[p * p:: p]))
    return [i for i, f in enumerate(sieve) if f]


def _product_tree(factors: list[int]) -> int:
    if not factors:
        return 1
    while len(factors) > 1:
        nxt = [factors[i] * factors[i + 1] for i in range(0, len(factors) - 1, 2)]
        if len(factors) & 1:
            nxt.append(factors[-1])
        factors = nxt
    return factors[0]


def binomial(n: int, k: int) -> int:
    """Exact binomial(n, k); equal to math.comb but fast for huge n."""
    if n < 0 or k < 0:
        raise ValueError("binomial needs nonnegative arguments")
    if k > n:
        return 0
    k = min(k, n - k)
    if n <= _SMALL_CUTOFF:
        return math.comb(n, k)
    m = n - k
    factors = []
    for p in _primes_upto(n):
        e = 0
        q = p
        while q <= n:
            e += n // q - k // q - m // q
            q *= p
        if e == 1:
            factors.append(p)
        elif e > 1:
            factors.append(p ** e)
    return _product_tree(factors)
