"""Brute-force exact oracles for small hypercubes.

Everything in this module is exact big-integer / big-rational arithmetic; no
floating point.  These routines anchor the rest of the package: the scalable
enumeration and series code is validated against them.

The size profile i_m(Q_d) (number of independent sets of each size m) is
computed by splitting Q_d into two copies of Q_{d-1}: an independent set of
Q_d is exactly a pair (A, B) of independent sets of Q_{d-1} with A and B
disjoint, since cross-layer edges join equal vertices.  Iterating A over the
independent sets of Q_{d-1} and counting B by a memoized vertex-branching
recursion keeps d = 5 cheap; d = 6 works the same way but iterates over the
254475 independent sets of Q_5 and is gated behind allow_slow (hours).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import hypercube as hc

ORACLE_MAX_DIM = 5  # d = 6 only with allow_slow=True


@dataclass(frozen=True)
class SizeProfile:
    """Exact counts i_m(Q_d), index m = set size."""

    d: int
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    def partition_value(self, lam: Fraction) -> Fraction:
        """Z(lam) = sum_m i_m lam^m."""
        lam = Fraction(lam)
        return sum((c * lam ** m for m, c in enumerate(self.counts)), Fraction(0))

    def mean_size(self, lam: Fraction) -> Fraction:
        lam = Fraction(lam)
        z = self.partition_value(lam)
        weighted = sum((m * c * lam ** m for m, c in enumerate(self.counts)), Fraction(0))
        return weighted / z

    def size_distribution(self, lam: Fraction) -> tuple[Fraction, ...]:
        lam = Fraction(lam)
        z = self.partition_value(lam)
        return tuple(c * lam ** m / z for m, c in enumerate(self.counts))

    def to_json(self) -> dict:
        return {"d": self.d, "counts": [str(c) for c in self.counts]}

    @staticmethod
    def from_json(obj: dict) -> "SizeProfile":
        return SizeProfile(int(obj["d"]), tuple(int(c) for c in obj["counts"]))


def _graph_vertices(d: int) -> int:
    # number of vertices of Q_d, allowing the degenerate single-vertex Q_0
    return 1 << d


def _neighbor_masks(d: int) -> list[int]:
    if d == 0:
        return [0]
    return hc.neighbor_masks(d)


def independent_set_masks(d: int) -> list[int]:
    """All independent sets of Q_d as occupancy bitmasks, ascending."""
    nbrs = _neighbor_masks(d)
    sets = [0]
    for v in range(_graph_vertices(d)):
        bit = 1 << v
        nb = nbrs[v]
        sets += [s | bit for s in sets if not (s & nb)]
    return sorted(sets)


def _poly_add_shifted(acc: list[int], poly: list[int], shift: int) -> None:
    need = shift + len(poly)
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for i, c in enumerate(poly):
        acc[shift + i] += c


class _IndependencePolyCounter:
    """Counts independent sets by size on an induced subgraph of Q_d.

    State is the bitmask of still-available vertices; branching on the lowest
    available vertex v gives I(G) = I(G - v) + x * I(G - N[v]).
    """

    def __init__(self, d: int):
        self.d = d
        self.nbrs = _neighbor_masks(d)
        self.memo: dict[int, tuple[int, ...]] = {0: (1,)}

    def poly(self, available: int) -> tuple[int, ...]:
        cached = self.memo.get(available)
        if cached is not None:
            return cached
        v = (available & -available).bit_length() - 1
        bit = 1 << v
        without = self.poly(available & ~bit)
        with_v = self.poly(available & ~(bit | self.nbrs[v]))
        out = list(without)
        _poly_add_shifted(out, list(with_v), 1)
        result = tuple(out)
        self.memo[available] = result
        return result


@lru_cache(maxsize=8)
def _counter(d: int) -> _IndependencePolyCounter:
    return _IndependencePolyCounter(d)


def independence_poly(d: int, removed: tuple[int, ...] = ()) -> tuple[int, ...]:
    """Size-indexed counts of independent sets of Q_d with `removed` deleted.

    Deletion removes the vertices only (their neighbors stay).  d <= 5.
    """
    hc.check_dim(d)
    if d > ORACLE_MAX_DIM:
        raise ValueError(f"dimension {d} too large for exact oracle (max {ORACLE_MAX_DIM})")
    mask_all = (1 << _graph_vertices(d)) - 1
    removed_mask = 0
    for v in removed:
        hc.check_vertex(v, d)
        removed_mask |= 1 << v
    return _counter(d).poly(mask_all & ~removed_mask)


def size_profile(d: int, allow_slow: bool = False) -> SizeProfile:
    """Exact i_m(Q_d) for all m, via the layered-transfer recursion.

    d <= 5 runs in seconds; d = 6 iterates over all independent sets of Q_5
    and takes hours, so it must be opted into with allow_slow=True.
    """
    hc.check_dim(d)
    if d > 6:
        raise ValueError(f"dimension {d} too large for exact oracle (max 6 with allow_slow)")
    if d == 6 and not allow_slow:
        raise ValueError("dimension 6 requires allow_slow=True (multi-hour budget)")

    lower = d - 1
    counter = _IndependencePolyCounter(lower)
    mask_all = (1 << _graph_vertices(lower)) - 1
    counts: list[int] = []
    for a in independent_set_masks(lower):
        poly = counter.poly(mask_all & ~a)
        _poly_add_shifted(counts, list(poly), a.bit_count())
    return SizeProfile(d, tuple(counts))


def size_profile_exhaustive(d: int) -> SizeProfile:
    """Independent oracle for d <= 4: test all 2^(2^d) subsets directly."""
    hc.check_dim(d)
    if d > 4:
        raise ValueError("exhaustive subset enumeration is limited to d <= 4")
    nbrs = hc.neighbor_masks(d)
    n = 1 << d
    counts = [0] * (n + 1)
    for mask in range(1 << n):
        ok = True
        m = mask
        while m:
            v = (m & -m).bit_length() - 1
            # only check neighbors above v; each edge tested once
            if mask & nbrs[v] & ~((1 << (v + 1)) - 1):
                ok = False
                break
            m &= m - 1
        if ok:
            counts[mask.bit_count()] += 1
    while counts and counts[-1] == 0:
        counts.pop()
    return SizeProfile(d, tuple(counts))


# -- restricted (one-sided defect) model, tiny d ----------------------------


def _is_admissible_defect(support: frozenset[int], d: int) -> bool:
    """Connected under distance-2 moves and closure at most half the side."""
    comps = hc.square_components(support, d)
    if len(comps) != 1:
        return False
    return len(hc.closure(support, d)) <= hc.n_side(d) // 2


def _brute_polymers(d: int) -> list[frozenset[int]]:
    """All admissible connected odd defect sets, by direct subset filtering."""
    odd = hc.odd_side(d)
    out = []
    for mask in range(1, 1 << len(odd)):
        support = frozenset(odd[i] for i in range(len(odd)) if mask >> i & 1)
        if _is_admissible_defect(support, d):
            out.append(support)
    return sorted(out, key=lambda s: tuple(sorted(s)))


@dataclass(frozen=True)
class OddModelProfile:
    """Exact data of the one-sided defect model at tiny d.

    xi_terms maps (defect size, neighborhood size) to the number of mutually
    distant defect collections with those totals, so the model's partition
    function is  sum over terms of  count * lam^size / (1+lam)^nbhd,
    and z_poly lists the coefficients of (1+lam)^n_side * that sum, which is
    a genuine polynomial: the size-indexed counts of independent sets the
    model can produce.
    """

    d: int
    polymers: tuple[tuple[int, ...], ...]
    xi_terms: tuple[tuple[tuple[int, int], int], ...]
    z_poly: tuple[int, ...]
    config_list: tuple[tuple[tuple[int, ...], ...], ...]

    def xi_value(self, lam: Fraction) -> Fraction:
        lam = Fraction(lam)
        total = Fraction(0)
        for (size, nbhd), count in self.xi_terms:
            total += count * lam ** size / (1 + lam) ** nbhd
        return total

    def z_value(self, lam: Fraction) -> Fraction:
        lam = Fraction(lam)
        return sum((c * lam ** m for m, c in enumerate(self.z_poly)), Fraction(0))


def odd_model_exact(d: int) -> OddModelProfile:
    """Enumerate the one-sided defect model exhaustively; d <= 4."""
    hc.check_dim(d)
    if d > 4:
        raise ValueError("odd_model_exact is limited to d <= 4")
    polymers = _brute_polymers(d)
    n = hc.n_side(d)
    nbhds = [frozenset(hc.neighborhood(s, d)) for s in polymers]

    def compatible(i: int, j: int) -> bool:
        # distance > 2: no shared vertices and no shared neighbors
        if polymers[i] & polymers[j]:
            return False
        return not (nbhds[i] & nbhds[j])

    compat = [[compatible(i, j) for j in range(len(polymers))] for i in range(len(polymers))]

    collections: list[tuple[int, ...]] = [()]

    def grow(chosen: tuple[int, ...], start: int) -> None:
        for i in range(start, len(polymers)):
            if all(compat[i][j] for j in chosen):
                collections.append(chosen + (i,))
                grow(chosen + (i,), i + 1)

    grow((), 0)

    xi: dict[tuple[int, int], int] = {}
    for coll in collections:
        size = sum(len(polymers[i]) for i in coll)
        nbhd = sum(len(nbhds[i]) for i in coll)
        xi[(size, nbhd)] = xi.get((size, nbhd), 0) + 1

    # z = (1+lam)^n * xi: polynomial coefficients by set size
    z: list[int] = []
    for (size, nbhd), count in xi.items():
        assert nbhd <= n
        row = _binomial_row(n - nbhd)
        _poly_add_shifted(z, [count * c for c in row], size)
    while z and z[-1] == 0:
        z.pop()

    return OddModelProfile(
        d=d,
        polymers=tuple(tuple(sorted(s)) for s in polymers),
        xi_terms=tuple(sorted(xi.items())),
        z_poly=tuple(z),
        config_list=tuple(
            tuple(tuple(sorted(polymers[i])) for i in coll) for coll in collections
        ),
    )


def _binomial_row(n: int) -> list[int]:
    row = [1]
    for _ in range(n):
        row = [a + b for a, b in zip([0] + row, row + [0])]
    return row


def achievable_independent_sets(d: int) -> dict[int, int]:
    """Size counts of independent sets whose odd part decomposes into
    admissible defects; the cross-check target for z_poly.  d <= 4."""
    hc.check_dim(d)
    if d > 4:
        raise ValueError("achievability enumeration is limited to d <= 4")
    n = 1 << d
    counts: dict[int, int] = {}
    for mask in independent_set_masks(d):
        odd_part = [v for v in range(n) if mask >> v & 1 and hc.parity(v) == 1]
        ok = True
        for comp in hc.square_components(odd_part, d):
            if len(hc.closure(comp, d)) > hc.n_side(d) // 2:
                ok = False
                break
        if ok:
            size = mask.bit_count()
            counts[size] = counts.get(size, 0) + 1
    return counts


# -- full-model helpers -------------------------------------------------------


@dataclass(frozen=True)
class HardcoreExact:
    """Exact fugacity-weighted data of the full model at one rational lam."""

    d: int
    lam: Fraction
    z: Fraction
    mean_size: Fraction
    size_distribution: tuple[Fraction, ...]


def hardcore_exact(d: int, lam: Fraction) -> HardcoreExact:
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("fugacity must be positive")
    profile = size_profile(d)
    z = profile.partition_value(lam)
    return HardcoreExact(
        d=d,
        lam=lam,
        z=z,
        mean_size=profile.mean_size(lam),
        size_distribution=profile.size_distribution(lam),
    )
