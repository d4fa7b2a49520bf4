"""Connected odd defects of Q_d and their censuses.

A defect (polymer) is a set S of odd vertices that is connected under
distance-2 moves and whose closure covers at most half of the odd side.  Its
weight at fugacity lam is lam^|S| / (1+lam)^|N(S)|.  Two defects interact iff
they are within graph distance 2 of each other (share a vertex or a neighbor).

Enumeration exploits translation symmetry.  XOR by an even-parity word maps
the odd side to itself and preserves everything in sight, and the action on
(support, marked vertex) pairs is free, so for any translation-invariant f

    sum over all defects of f(S)  =  n_side * sum_{S containing V0} f(S)/|S|,

where V0 is the fixed root vertex.  Counts per type follow with f = 1.  Note
the action on bare supports is NOT free (a two-element support {v, v^t} is
fixed by t), which is why the marked-vertex form is used throughout.

Types: a defect is classified by the isomorphism class of its distance-2
graph together with its deficiency c = d*|S| - |N(S)|; the deficiency is the
dimension-free part of the neighborhood size, so one type means one weight.
The census records whether any graph class ever splits across deficiencies
(none do for sizes up to 4; the census keeps checking anyway).
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Iterator

from . import hypercube as hc
from .errors import BudgetExceededError
from .symbolic import RatPoly, interpolate_poly

V0 = 1  # root: the smallest odd vertex


class _Ctx:
    """Per-dimension caches for square-graph adjacency and validity tests."""

    def __init__(self, d: int):
        hc.check_dim(d)
        self.d = d
        self.half = hc.n_side(d) // 2
        self._sq: dict[int, tuple[int, ...]] = {}
        self._valid: dict[frozenset, bool] = {}
        self._nbhd: dict[frozenset, int] = {}

    def sq_neighbors(self, v: int) -> tuple[int, ...]:
        out = self._sq.get(v)
        if out is None:
            out = hc.square_neighbors(v, self.d)
            self._sq[v] = out
        return out

    def neighborhood(self, support: frozenset) -> set[int]:
        d = self.d
        out: set[int] = set()
        for v in support:
            for i in range(d):
                out.add(v ^ (1 << i))
        return out

    def nbhd_size(self, support: frozenset) -> int:
        out = self._nbhd.get(support)
        if out is None:
            out = len(self.neighborhood(support))
            self._nbhd[support] = out
        return out

    def closure_size(self, support: frozenset) -> int:
        nbhd = self.neighborhood(support)
        candidates = set(support)
        for v in support:
            candidates.update(self.sq_neighbors(v))
        d = self.d
        count = 0
        for u in candidates:
            if all((u ^ (1 << i)) in nbhd for i in range(d)):
                count += 1
                if count > self.half:
                    break
        return count

    def is_valid(self, support: frozenset) -> bool:
        """Closure condition only; connectivity is the caller's business."""
        out = self._valid.get(support)
        if out is None:
            out = self.closure_size(support) <= self.half
            self._valid[support] = out
        return out


@lru_cache(maxsize=32)
def _ctx(d: int) -> _Ctx:
    return _Ctx(d)


def _grow_connected(root: int, max_size: int,
                    neighbor_fn: Callable[[int], Iterable[int]],
                    budget: list[int] | None = None) -> Iterator[frozenset]:
    """All connected vertex sets containing `root`, each exactly once.

    Candidate lists carry the classic once-seen-never-again discipline, so a
    set is produced exactly at its canonical insertion order.  `budget`, when
    given, is a single-element mutable node countdown.
    """
    first = tuple(neighbor_fn(root))
    base = frozenset((root,))
    yield base

    def rec(s: frozenset, cand: tuple, seen: frozenset) -> Iterator[frozenset]:
        for i, v in enumerate(cand):
            if budget is not None:
                budget[0] -= 1
                if budget[0] < 0:
                    raise BudgetExceededError("connected-set enumeration budget exhausted")
            s2 = s | {v}
            yield s2
            if len(s2) < max_size:
                fresh = tuple(u for u in neighbor_fn(v) if u not in seen)
                yield from rec(s2, cand[i + 1:] + fresh, seen | frozenset(fresh))

    if max_size > 1:
        yield from rec(base, first, frozenset((root,)) | frozenset(first))


# -- types -------------------------------------------------------------------


@lru_cache(maxsize=None)
def _perm_table(size: int) -> tuple[tuple[int, ...], ...]:
    return tuple(itertools.permutations(range(size)))


MAX_TYPE_SIZE = 7  # exhaustive canonization; 7! = 5040 permutations


@dataclass(frozen=True, order=True)
class DefectType:
    """(size, deficiency, canonical distance-2 graph certificate)."""

    size: int
    deficiency: int
    cert: int

    @property
    def key(self) -> str:
        return f"s{self.size}c{self.deficiency}g{self.cert:x}"

    def nbhd_size(self, d: int) -> int:
        return d * self.size - self.deficiency

    def weight(self, lam: Fraction, d: int) -> Fraction:
        lam = Fraction(lam)
        return lam ** self.size / (1 + lam) ** self.nbhd_size(d)

    @staticmethod
    def from_key(key: str) -> "DefectType":
        m = re.fullmatch(r"s(\d+)c(\d+)g([0-9a-f]+)", key)
        if m is None:
            raise ValueError(f"malformed type key: {key!r}")
        return DefectType(size=int(m.group(1)), deficiency=int(m.group(2)),
                          cert=int(m.group(3), 16))


def _canonical_cert(support: frozenset) -> int:
    """Exhaustive canonical form of the distance-2 graph on the support."""
    vs = sorted(support)
    s = len(vs)
    if s > MAX_TYPE_SIZE:
        raise ValueError(f"type certificates support size <= {MAX_TYPE_SIZE}, got {s}")
    adj = [[(vs[i] ^ vs[j]).bit_count() == 2 for j in range(s)] for i in range(s)]
    best = None
    for perm in _perm_table(s):
        code = 0
        bit = 1
        for a in range(s):
            pa = perm[a]
            row = adj[pa]
            for b in range(a + 1, s):
                if row[perm[b]]:
                    code |= bit
                bit <<= 1
        if best is None or code < best:
            best = code
    return best


def classify(support: Iterable[int], d: int) -> DefectType:
    """Type of a connected defect set (connectivity is not re-checked)."""
    sup = frozenset(support)
    if not sup:
        raise ValueError("cannot classify an empty set")
    ctx = _ctx(d)
    nb = ctx.nbhd_size(sup)
    return DefectType(size=len(sup), deficiency=d * len(sup) - nb, cert=_canonical_cert(sup))


@dataclass(frozen=True)
class Polymer:
    support: tuple[int, ...]
    d: int
    nbhd_size: int
    type: DefectType

    @property
    def size(self) -> int:
        return len(self.support)

    def weight(self, lam: Fraction) -> Fraction:
        lam = Fraction(lam)
        return lam ** self.size / (1 + lam) ** self.nbhd_size


def _make_polymer(support: frozenset, d: int) -> Polymer:
    ctx = _ctx(d)
    return Polymer(support=tuple(sorted(support)), d=d,
                   nbhd_size=ctx.nbhd_size(support),
                   type=classify(support, d))


# -- enumeration --------------------------------------------------------------


def rooted_polymer_supports(d: int, max_size: int,
                            budget: int | None = None) -> list[frozenset]:
    """Supports of all polymers of size <= max_size that contain V0."""
    if max_size < 1:
        raise ValueError("max_size must be >= 1")
    ctx = _ctx(d)
    bud = [budget] if budget is not None else None
    out = [s for s in _grow_connected(V0, max_size, ctx.sq_neighbors, bud)
           if ctx.is_valid(s)]
    out.sort(key=lambda s: tuple(sorted(s)))
    return out


def enumerate_polymers(d: int, max_size: int, rooted: bool = False,
                       budget: int | None = None) -> list[Polymer]:
    """All polymers of size <= max_size, in ascending support order.

    rooted=True restricts to supports containing the root vertex V0 (the
    translation-reduced list); rooted=False enumerates globally and is only
    sensible for small d.
    """
    hc.check_dim(d)
    if d < 2:
        raise ValueError("the defect model needs d >= 2")
    if rooted:
        return [_make_polymer(s, d) for s in rooted_polymer_supports(d, max_size, budget)]
    ctx = _ctx(d)
    bud = [budget] if budget is not None else None
    out = []
    for root in hc.odd_side(d):
        def nbrs(v: int, _root=root) -> tuple[int, ...]:
            return tuple(u for u in ctx.sq_neighbors(v) if u > _root)

        for s in _grow_connected(root, max_size, nbrs, bud):
            if ctx.is_valid(s):
                out.append(_make_polymer(s, d))
    out.sort(key=lambda p: p.support)
    return out


def polymers_touching(targets: frozenset, d: int, max_size: int,
                      budget: list[int] | None = None) -> list[frozenset]:
    """Supports of polymers of size <= max_size meeting the target set."""
    if max_size < 1:
        return []
    ctx = _ctx(d)
    seen: set[frozenset] = set()
    for w in sorted(targets):
        for s in _grow_connected(w, max_size, ctx.sq_neighbors, budget):
            if s not in seen and ctx.is_valid(s):
                seen.add(s)
    return sorted(seen, key=lambda s: tuple(sorted(s)))


# -- censuses ------------------------------------------------------------------


@dataclass(frozen=True)
class CensusEntry:
    type: DefectType
    count: int  # n_T: number of polymers of this type in all of Q_d


@dataclass(frozen=True)
class Census:
    """Global type counts at one dimension, via rooted counting."""

    d: int
    max_size: int
    entries: tuple[CensusEntry, ...]
    split_certs: tuple[tuple[int, int], ...]  # (size, cert) with >1 deficiency

    def by_key(self) -> dict[str, CensusEntry]:
        return {e.type.key: e for e in self.entries}

    def expected_type_count(self, type_key: str, lam: Fraction) -> Fraction:
        e = self.by_key()[type_key]
        return e.count * e.type.weight(lam, self.d)

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "max_size": self.max_size,
            "entries": [
                {
                    "size": e.type.size,
                    "deficiency": e.type.deficiency,
                    "cert": e.type.cert,
                    "key": e.type.key,
                    "count": str(e.count),
                    "nbhd_size": e.type.nbhd_size(self.d),
                }
                for e in self.entries
            ],
            "split_certs": [list(x) for x in self.split_certs],
        }

    @staticmethod
    def from_json(obj: dict) -> "Census":
        entries = tuple(
            CensusEntry(
                type=DefectType(int(e["size"]), int(e["deficiency"]), int(e["cert"])),
                count=int(e["count"]),
            )
            for e in obj["entries"]
        )
        return Census(int(obj["d"]), int(obj["max_size"]), entries,
                      tuple(tuple(x) for x in obj["split_certs"]))


def census(d: int, max_size: int, budget: int | None = None) -> Census:
    """Count polymers of each type across all of Q_d."""
    if d < 2:
        raise ValueError("the defect model needs d >= 2")
    n = hc.n_side(d)
    rooted_counts: dict[DefectType, int] = {}
    for s in rooted_polymer_supports(d, max_size, budget):
        t = classify(s, d)
        rooted_counts[t] = rooted_counts.get(t, 0) + 1

    entries = []
    for t, r in sorted(rooted_counts.items()):
        total = Fraction(n * r, t.size)
        if total.denominator != 1:
            raise AssertionError(f"type {t.key}: non-integer global count {total}")
        entries.append(CensusEntry(type=t, count=int(total)))

    by_cert: dict[tuple[int, int], set[int]] = {}
    for t in rooted_counts:
        by_cert.setdefault((t.size, t.cert), set()).add(t.deficiency)
    split = tuple(sorted(k for k, v in by_cert.items() if len(v) > 1))
    return Census(d=d, max_size=max_size, entries=tuple(entries), split_certs=split)


@dataclass(frozen=True)
class SymbolicCensus:
    """Type counts as exact polynomials in the dimension: n_T(d)/n_side."""

    max_size: int
    grid: tuple[int, ...]
    entries: tuple[tuple[DefectType, RatPoly], ...]

    def by_key(self) -> dict[str, RatPoly]:
        return {t.key: p for t, p in self.entries}


def symbolic_census(max_size: int, grid: tuple[int, ...] | None = None,
                    processes: int = 1) -> SymbolicCensus:
    """Interpolate per-type counts across dimensions.

    For a type of size s the rooted count divided by s is a polynomial in d
    of degree at most 2(s-1) (each added vertex brings at most two fresh
    coordinates), so a grid of 2*max_size points starting at 2*max_size + 1
    fits every type with one spare point for the exactness check.
    """
    if max_size < 1 or max_size > 4:
        raise ValueError("symbolic_census supports max_size in 1..4")
    if grid is None:
        lo = 2 * max_size + 1
        grid = tuple(range(lo, lo + 2 * max_size))
    if len(grid) < 3:
        raise ValueError("grid must have at least 3 points")

    censuses = _map_maybe_parallel(_census_ratio_task,
                                   [(d, max_size) for d in grid], processes)

    all_types: set[DefectType] = set()
    for ratios in censuses:
        all_types.update(ratios)

    entries = []
    for t in sorted(all_types):
        pts = []
        for d, ratios in zip(grid, censuses):
            pts.append((d, ratios.get(t, Fraction(0))))
        bound = min(2 * (t.size - 1), len(grid) - 2)
        poly = interpolate_poly(pts, bound, var="d")
        entries.append((t, poly))
    return SymbolicCensus(max_size=max_size, grid=tuple(grid), entries=tuple(entries))


def _census_ratio_task(args: tuple[int, int]) -> dict[DefectType, Fraction]:
    d, max_size = args
    c = census(d, max_size)
    return {e.type: Fraction(e.count, hc.n_side(d)) for e in c.entries}


def _map_maybe_parallel(fn, items, processes: int):
    if processes and processes > 1 and len(items) > 1:
        import multiprocessing

        with multiprocessing.Pool(min(processes, len(items))) as pool:
            return pool.map(fn, items)
    return [fn(x) for x in items]
