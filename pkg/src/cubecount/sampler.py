"""Glauber dynamics for the hard-core model on Q_d, with defect extraction.

Single-site heat bath: pick a uniform vertex; if some neighbor is occupied
the vertex becomes vacant, otherwise it becomes occupied with probability
lam/(1+lam).  The stationary law is the hard-core measure at fugacity lam.
Runs are fully deterministic given a seed (Mersenne Twister via
random.Random, one vertex draw plus one uniform per step).

Defects are the distance-2 components of the minority side of a sample
(ties resolved to the odd side); their type statistics are compared against
census predictions m_T = n_T * w_T.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator

from scipy.stats import chi2 as _chi2

from . import hypercube as hc
from . import polymers as pm


@dataclass(frozen=True)
class ChainState:
    """A snapshot of the chain: occupancy bitmask plus running tallies."""

    d: int
    step: int
    occupancy: int  # bit v set <=> vertex v in I
    size: int
    odd_size: int
    even_size: int
    rng_state: tuple | None = None  # captured only when requested


@dataclass(frozen=True)
class DefectReport:
    """Defect decomposition of one snapshot."""

    step: int
    side: str  # "odd" | "even" (minority, ties to odd)
    type_counts: tuple[tuple[str, int], ...]  # sorted (type key, count)
    total_size: int  # sum of defect sizes
    nbhd_total: int  # sum of |N(S)| over defects

    def count(self, key: str) -> int:
        return dict(self.type_counts).get(key, 0)


@lru_cache(maxsize=None)
def _parity_mask(d: int) -> int:
    mask = 0
    for v in range(1 << d):
        if hc.parity(v):
            mask |= 1 << v
    return mask


def default_burn_in(d: int) -> int:
    # empirical choice: ten sweeps times dimension
    return 10 * (1 << d) * d


def glauber_run(d: int, lam: Fraction, steps: int,
                burn_in: int | None = None, thin: int = 1, seed: int = 0,
                debug: bool = False, capture_rng: bool = False,
                start: int = 0) -> Iterator[ChainState]:
    """Yield snapshots every `thin` steps after `burn_in`, up to `steps`.

    steps counts all attempted updates including burn-in, so steps == burn_in
    yields nothing.  The chain starts from the configuration `start`
    (default empty), which must be an independent set.
    """
    hc.check_dim(d)
    lam = Fraction(lam)
    if lam <= 0:
        raise ValueError("fugacity must be positive")
    if burn_in is None:
        burn_in = default_burn_in(d)
    if steps < burn_in:
        raise ValueError("steps must be at least burn_in")
    if thin < 1:
        raise ValueError("thin must be >= 1")
    n = 1 << d
    if start < 0 or start >> n:
        raise ValueError("start configuration out of range")
    if not hc.is_independent(start, d):
        raise ValueError("start configuration is not an independent set")

    nbr = hc.neighbor_masks(d)
    odd_mask = _parity_mask(d)
    p = float(lam / (1 + lam))
    rng = random.Random(seed)

    occ = start
    size = occ.bit_count()
    odd = (occ & odd_mask).bit_count()
    next_snap = burn_in + thin
    for step in range(1, steps + 1):
        v = rng.getrandbits(d)
        coin = rng.random()
        bit = 1 << v
        if occ & nbr[v]:
            newbit = 0
        else:
            newbit = 1 if coin < p else 0
        old = occ & bit
        if newbit and not old:
            occ |= bit
            size += 1
            odd += 1 if bit & odd_mask else 0
        elif old and not newbit:
            occ &= ~bit
            size -= 1
            odd -= 1 if bit & odd_mask else 0
        if step == next_snap:
            next_snap += thin
            if debug:
                assert hc.is_independent(occ, d), f"dependent state at step {step}"
                assert size == occ.bit_count()
            yield ChainState(
                d=d, step=step, occupancy=occ, size=size, odd_size=odd,
                even_size=size - odd,
                rng_state=rng.getstate() if capture_rng else None)


def extract_defects(state: ChainState, debug: bool = False) -> DefectReport:
    """Classify the distance-2 components of the snapshot's minority side."""
    d = state.d
    odd_mask = _parity_mask(d)
    if state.odd_size <= state.even_size:
        side, side_mask = "odd", odd_mask
    else:
        side, side_mask = "even", ~odd_mask
    bits = state.occupancy & side_mask
    vertices = set()
    while bits:
        low = bits & -bits
        vertices.add(low.bit_length() - 1)
        bits ^= low
    comps = hc.square_components(vertices, d)
    if debug:
        assert sorted(v for c in comps for v in c) == sorted(vertices)
    counts: dict[str, int] = {}
    nbhd_total = 0
    for comp in comps:
        if len(comp) <= pm.MAX_TYPE_SIZE:
            key = pm.classify(frozenset(comp), d).key
        else:
            key = f"s{len(comp)}:big"
        counts[key] = counts.get(key, 0) + 1
        nbhd_total += len(hc.neighborhood(comp, d))
    return DefectReport(
        step=state.step, side=side,
        type_counts=tuple(sorted(counts.items())),
        total_size=sum(len(c) for c in comps),
        nbhd_total=nbhd_total)


# -- statistics ---------------------------------------------------------------------


def _mean_var(xs: list[float]) -> tuple[float, float]:
    n = len(xs)
    m = sum(xs) / n
    if n < 2:
        return m, 0.0
    return m, sum((x - m) ** 2 for x in xs) / (n - 1)


def _poisson_gof(counts: list[int], mean: float) -> dict | None:
    """Chi-square goodness of fit against Poisson(mean), pooling tail bins.

    Bins k = 0, 1, 2, ... are pooled from the top until every expected count
    is at least 5; returns None when fewer than two bins survive.
    """
    n = len(counts)
    top = max(counts)
    probs = []
    acc = 0.0
    for k in range(top + 1):
        p = math.exp(-mean) * mean ** k / math.factorial(k)
        probs.append(p)
        acc += p
    probs.append(max(1.0 - acc, 0.0))  # tail bucket >= top+1

    observed = [0] * (top + 2)
    for c in counts:
        observed[c] += 1
    # pool from the top until expected >= 5 everywhere
    while len(probs) > 1 and n * probs[-1] < 5.0:
        probs[-2] += probs[-1]
        observed[-2] += observed[-1]
        probs.pop()
        observed.pop()
    if len(probs) < 2:
        return None
    stat = 0.0
    for o, pr in zip(observed, probs):
        e = n * pr
        stat += (o - e) ** 2 / e
    df = len(probs) - 1
    return {"stat": stat, "df": df, "p": float(_chi2.sf(stat, df)),
            "bins": len(probs)}


def _moments(xs: list[float]) -> dict:
    n = len(xs)
    m, v = _mean_var(xs)
    sd = math.sqrt(v) if v > 0 else 0.0
    skew = kurt = 0.0
    if sd > 0:
        skew = sum((x - m) ** 3 for x in xs) / n / sd ** 3
        kurt = sum((x - m) ** 4 for x in xs) / n / sd ** 4 - 3.0
    return {"mean": m, "var": v, "skew": skew, "excess_kurtosis": kurt}


@dataclass(frozen=True)
class SamplerSummary:
    """Aggregated defect statistics against census predictions."""

    d: int
    lam: str
    samples: int
    size_stats: dict
    per_type: dict  # key -> stats dict
    clt: dict  # moments of total size and neighborhood size
    joint: dict | None

    def to_json(self) -> dict:
        return {
            "d": self.d, "lam": self.lam, "samples": self.samples,
            "size_stats": self.size_stats, "per_type": self.per_type,
            "clt": self.clt, "joint": self.joint,
        }


def defect_statistics(states: Iterable[ChainState],
                      reports: Iterable[DefectReport],
                      cen: pm.Census, lam: Fraction) -> SamplerSummary:
    """Compare sampled defect-type counts with m_T = n_T * w_T predictions.

    Emits per-type mean/variance with z-scores against the null standard
    error sqrt(m_T/n), Poisson goodness of fit where the pooled bins allow
    it, CLT-style moment diagnostics for the total defect size and
    neighborhood, and the correlation between the two commonest types.
    """
    states = list(states)
    reports = list(reports)
    if len(reports) < 2:
        raise ValueError("need at least two samples for statistics")
    if len(states) != len(reports):
        raise ValueError("states and reports must align")
    n = len(reports)
    lam = Fraction(lam)

    keys = sorted({k for r in reports for k, _ in r.type_counts}
                  | set(cen.by_key()))
    per_type: dict[str, dict] = {}
    for key in keys:
        xs = [float(r.count(key)) for r in reports]
        mean, var = _mean_var(xs)
        entry: dict = {"mean": mean, "var": var}
        if key in cen.by_key():
            m_t = float(cen.expected_type_count(key, lam))
            se = math.sqrt(m_t / n)
            entry.update({
                "m_T": m_t,
                "null_se": se,
                "z": (mean - m_t) / se if se > 0 else 0.0,
                "var_over_mean": var / mean if mean > 0 else None,
            })
            if m_t < 20:
                entry["poisson_gof"] = _poisson_gof(
                    [r.count(key) for r in reports], m_t)
        per_type[key] = entry

    sizes = [float(s.size) for s in states]
    odd = [float(s.odd_size) for s in states]
    even = [float(s.even_size) for s in states]
    sm, sv = _mean_var(sizes)
    om, _ = _mean_var(odd)
    em, _ = _mean_var(even)
    size_stats = {"mean": sm, "var": sv, "se": math.sqrt(sv / n),
                  "odd_mean": om, "even_mean": em}

    clt = {"total_size": _moments([float(r.total_size) for r in reports]),
           "nbhd_total": _moments([float(r.nbhd_total) for r in reports])}

    joint = None
    observed = [k for k in keys
                if sum(r.count(k) for r in reports) > 0]
    observed.sort(key=lambda k: -sum(r.count(k) for r in reports))
    if len(observed) >= 2:
        a, b = observed[:2]
        xa = [float(r.count(a)) for r in reports]
        xb = [float(r.count(b)) for r in reports]
        ma, va = _mean_var(xa)
        mb, vb = _mean_var(xb)
        cov = sum((x - ma) * (y - mb) for x, y in zip(xa, xb)) / (n - 1)
        corr = cov / math.sqrt(va * vb) if va > 0 and vb > 0 else 0.0
        joint = {"types": [a, b], "cov": cov, "corr": corr}

    return SamplerSummary(
        d=states[0].d, lam=str(lam), samples=n, size_stats=size_stats,
        per_type=per_type, clt=clt, joint=joint)


def reports_to_csv(states: Iterable[ChainState],
                   reports: Iterable[DefectReport]) -> str:
    """CSV log: step, |I|, |I on odd|, |I on even|, defect type counts."""
    lines = ["step,size,odd,even,defects"]
    for s, r in zip(states, reports):
        defects = ";".join(f"{k}:{c}" for k, c in r.type_counts)
        lines.append(f"{s.step},{s.size},{s.odd_size},{s.even_size},{defects}")
    return "\n".join(lines) + "\n"


def _chain_task(args) -> list[ChainState]:
    d, lam, steps, burn_in, thin, seed, debug = args
    return list(glauber_run(d, lam, steps, burn_in, thin, seed, debug))


def sample_chains(d: int, lam: Fraction, steps: int,
                  burn_in: int | None = None, thin: int = 1, seed: int = 0,
                  chains: int = 1, processes: int = 1,
                  debug: bool = False) -> list[list[ChainState]]:
    """Run independent chains with derived seeds; deterministic merge order.

    Chain i uses seed + 1000003*i; the result list is ordered by chain index
    regardless of the degree of parallelism, so output bytes never depend on
    the process count.
    """
    if chains < 1:
        raise ValueError("need at least one chain")
    tasks = [(d, lam, steps, burn_in, thin, seed + 1000003 * i, debug)
             for i in range(chains)]
    return pm._map_maybe_parallel(_chain_task, tasks, processes)


def two_chain_diagnostic(d: int, lam: Fraction, steps: int, seed: int = 0,
                         thin: int | None = None) -> dict:
    """Crude mixing check: chains from the two fully-packed ground states.

    Tracks the odd-minus-even occupancy imbalance of both chains; once the
    chains have each visited both signs, the run has at least crossed
    between the two modes.  Reported, never asserted.
    """
    hc.check_dim(d)
    n = 1 << d
    if thin is None:
        thin = n
    odd_mask = _parity_mask(d)
    even_start = 0
    for v in range(n):
        if not hc.parity(v):
            even_start |= 1 << v
    runs = []
    for tag, start in (("from_odd", odd_mask), ("from_even", even_start)):
        trace = []
        for st in glauber_run(d, lam, steps, burn_in=0, thin=thin,
                              seed=seed, start=start):
            trace.append((st.step, st.odd_size - st.even_size))
        runs.append((tag, trace))
    out = {"d": d, "lam": str(Fraction(lam)), "steps": steps, "thin": thin}
    for tag, trace in runs:
        signs = {1 if imb > 0 else (-1 if imb < 0 else 0) for _, imb in trace}
        out[tag] = {
            "snapshots": len(trace),
            "final_imbalance": trace[-1][1] if trace else None,
            "visited_both_modes": (1 in signs) and (-1 in signs),
        }
    return out
