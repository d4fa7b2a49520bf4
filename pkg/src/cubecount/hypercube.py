"""Vertex-level combinatorics of the discrete hypercube Q_d.

Vertices of Q_d are the integers 0 .. 2^d - 1, read as bit vectors; u and v
are adjacent iff they differ in exactly one bit.  The even/odd bipartition is
by popcount parity, and each side has n_side(d) = 2^(d-1) vertices.

Vertex sets cross API boundaries as sorted tuples (ascending numeric order);
internally most routines work with Python sets.  All functions are pure.
"""

from __future__ import annotations

from typing import Collection, Iterable

MAX_DIM = 24  # 2^24-entry side masks are still cheap; beyond that, refuse


def check_dim(d: int) -> None:
    if not isinstance(d, int) or d < 1:
        raise ValueError(f"dimension must be a positive integer, got {d!r}")
    if d > MAX_DIM:
        raise ValueError(f"dimension {d} exceeds supported maximum {MAX_DIM}")


def n_side(d: int) -> int:
    """Size of each parity class of Q_d."""
    check_dim(d)
    return 1 << (d - 1)


def parity(v: int) -> int:
    return bin(v).count("1") & 1


def check_vertex(v: int, d: int) -> None:
    if not isinstance(v, int) or v < 0 or v >> d:
        raise ValueError(f"vertex {v!r} out of range for dimension {d}")


def neighbors(v: int, d: int) -> tuple[int, ...]:
    """The d neighbors of v, ascending."""
    check_dim(d)
    check_vertex(v, d)
    return tuple(sorted(v ^ (1 << i) for i in range(d)))


def square_neighbors(v: int, d: int) -> tuple[int, ...]:
    """Vertices at Hamming distance exactly 2 from v, ascending."""
    check_dim(d)
    check_vertex(v, d)
    out = []
    for i in range(d):
        for j in range(i + 1, d):
            out.append(v ^ (1 << i) ^ (1 << j))
    return tuple(sorted(out))


def even_side(d: int) -> tuple[int, ...]:
    check_dim(d)
    return tuple(v for v in range(1 << d) if parity(v) == 0)


def odd_side(d: int) -> tuple[int, ...]:
    check_dim(d)
    return tuple(v for v in range(1 << d) if parity(v) == 1)


def _check_uniform_parity(vertices: Collection[int], d: int) -> None:
    parities = {parity(v) for v in vertices}
    if len(parities) > 1:
        raise ValueError("vertex set mixes parities")


def neighborhood(vertices: Iterable[int], d: int) -> tuple[int, ...]:
    """N(S): union of the neighbor sets of S, ascending.

    S must lie in a single parity class; N(S) then lies in the other one.
    """
    check_dim(d)
    vs = set(vertices)
    for v in vs:
        check_vertex(v, d)
    _check_uniform_parity(vs, d)
    out: set[int] = set()
    for v in vs:
        for i in range(d):
            out.add(v ^ (1 << i))
    return tuple(sorted(out))


def closure(vertices: Iterable[int], d: int) -> tuple[int, ...]:
    """All same-side vertices whose entire neighborhood lies inside N(S).

    closure(S) always contains S itself; closure(empty) is empty.  The size
    of the closure is what separates small defects from the bulk: a defect
    set is only admissible when its closure covers at most half of its side.
    """
    check_dim(d)
    vs = set(vertices)
    if not vs:
        return ()
    for v in vs:
        check_vertex(v, d)
    _check_uniform_parity(vs, d)
    nbhd = set(neighborhood(vs, d))
    side_parity = parity(next(iter(vs)))
    # candidates must have every neighbor in N(S); any such vertex is within
    # distance 2 of S, so scan S plus its distance-2 shell instead of the side
    candidates = set(vs)
    for v in vs:
        candidates.update(square_neighbors(v, d))
    out = []
    for u in sorted(candidates):
        if parity(u) != side_parity:
            continue
        if all((u ^ (1 << i)) in nbhd for i in range(d)):
            out.append(u)
    return tuple(out)


def square_components(vertices: Iterable[int], d: int) -> tuple[tuple[int, ...], ...]:
    """Connected components of S under distance-2 adjacency.

    Blocks are sorted internally and ordered by their minima.
    """
    check_dim(d)
    vs = set(vertices)
    for v in vs:
        check_vertex(v, d)
    comps = []
    remaining = set(vs)
    while remaining:
        root = min(remaining)
        comp = {root}
        frontier = [root]
        while frontier:
            v = frontier.pop()
            for u in square_neighbors(v, d):
                if u in remaining and u not in comp:
                    comp.add(u)
                    frontier.append(u)
        remaining -= comp
        comps.append(tuple(sorted(comp)))
    return tuple(sorted(comps, key=lambda c: c[0]))


def is_independent(mask: int, d: int) -> bool:
    """Whether the occupancy bitmask (bit v = vertex v in the set) is independent."""
    check_dim(d)
    for v in range(1 << d):
        if mask >> v & 1:
            for i in range(d):
                u = v ^ (1 << i)
                if u > v and mask >> u & 1:
                    return False
    return True


def neighbor_masks(d: int) -> list[int]:
    """Occupancy-bitmask adjacency table: entry v has bit u set iff u ~ v."""
    check_dim(d)
    out = []
    for v in range(1 << d):
        m = 0
        for i in range(d):
            m |= 1 << (v ^ (1 << i))
        out.append(m)
    return out
