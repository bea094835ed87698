"""Distribution of the chromatic number of the percolated graph G_p.

Exact mode enumerates every kept-edge mask and weights it by
``p^|S| (1-p)^(|E|-|S|)`` in rational arithmetic.  Monte Carlo mode draws
trials from a counter-based generator keyed by ``(seed, trial)`` so results
do not depend on how trials are split across workers.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from statistics import NormalDist

import numpy as np

from .graph import EdgeSubset, Graph
from .solvers import (
    _is_bipartite,
    chromatic_from_adjacency,
    chromatic_number,
    colorable_from_adjacency,
)

EXACT_EDGE_CAP = 24
CHUNK = 8192
THREADS_ENV = "PERCOLOR_THREADS"

_U64 = np.uint64
_GOLDEN = _U64(0x9E3779B97F4A7C15)
_M1 = _U64(0xBF58476D1CE4E5B9)
_M2 = _U64(0x94D049BB133111EB)


class CapExceededError(ValueError):
    pass


def parse_probability(p) -> Fraction:
    """Exact probability from a Fraction, int or ``"a/b"`` string.  Floats are refused."""
    if isinstance(p, bool) or isinstance(p, float):
        raise TypeError(f"exact mode needs a rational p such as '1/2', got {p!r}")
    if isinstance(p, str):
        text = p.strip()
        if "/" in text:
            num, den = text.split("/", 1)
            num, den = int(num), int(den)
            if den <= 0:
                raise ValueError(f"denominator must be positive in {p!r}")
            q = Fraction(num, den)
        else:
            q = Fraction(int(text))
    elif isinstance(p, (Fraction, int)):
        q = Fraction(p)
    else:
        raise TypeError(f"unsupported probability type {type(p).__name__}")
    if not 0 <= q <= 1:
        raise ValueError(f"probability must lie in [0, 1], got {q}")
    return q


def _loose_probability(p) -> Fraction:
    # Monte Carlo accepts floats too; they are converted exactly.
    if isinstance(p, float):
        if not 0 <= p <= 1:
            raise ValueError(f"probability must lie in [0, 1], got {p}")
        return Fraction(p)
    return parse_probability(p)


# counter-based randomness

def _mix(z: np.ndarray) -> np.ndarray:
    z = (z ^ (z >> _U64(30))) * _M1
    z = (z ^ (z >> _U64(27))) * _M2
    return z ^ (z >> _U64(31))


def _trial_bits(seed: int, start: int, count: int, m: int) -> np.ndarray:
    """64-bit words for trials ``start..start+count-1`` and edges ``0..m-1``.

    Word (i, j) is a pure function of (seed, i, j).
    """
    with np.errstate(over="ignore"):
        key = _mix(np.array([seed % 2**64], dtype=_U64) + _GOLDEN)
        trials = np.arange(start, start + count, dtype=_U64)
        trial_keys = _mix(key + trials * _GOLDEN)
        edges = np.arange(1, m + 1, dtype=_U64) * _M2
        return _mix(trial_keys[:, None] ^ edges[None, :])


def _keep_matrix(seed: int, start: int, count: int, m: int, p: Fraction) -> np.ndarray:
    if p == 1:
        return np.ones((count, m), dtype=bool)
    threshold = (p.numerator << 64) // p.denominator
    return _trial_bits(seed, start, count, m) < _U64(threshold)


def _rows_to_masks(keep: np.ndarray) -> list[int]:
    m = keep.shape[1]
    if m <= 63:
        weights = np.left_shift(np.uint64(1), np.arange(m, dtype=_U64))
        return [int(x) for x in (keep.astype(_U64) * weights).sum(axis=1, dtype=_U64)]
    packed = np.packbits(keep, axis=1, bitorder="little")
    return [int.from_bytes(row.tobytes(), "little") for row in packed]


def sample_mask(G: Graph, p, seed: int, trial: int = 0) -> int:
    q = _loose_probability(p)
    return _rows_to_masks(_keep_matrix(seed, trial, 1, G.m, q))[0]


def sample(G: Graph, p, seed: int, trial: int = 0) -> Graph:
    """One draw of G_p: the spanning subgraph of kept edges for ``(seed, trial)``."""
    return G.edge_subgraph(sample_mask(G, p, seed, trial))


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV)
    if raw:
        return max(1, int(raw))
    return os.cpu_count() or 1


# exact enumeration

def _check_cap(G: Graph, cap: int) -> None:
    if G.m > cap:
        raise CapExceededError(f"exact enumeration needs |E| <= {cap}, graph has {G.m}")


@lru_cache(maxsize=32)
def chi_table(G: Graph) -> np.ndarray:
    """chi of the spanning subgraph (V, S) for every edge mask S, indexed by S.

    Masks are visited in increasing order.  Dropping the top edge of S gives a
    smaller mask S', and chi(S) is either chi(S') or chi(S') + 1, so each mask
    costs one colourability decision.
    """
    n, m = G.n, G.m
    table = np.zeros(1 << m, dtype=np.uint8)
    if n == 0:
        return table
    table[0] = 1
    edges = G.edges
    for S in range(1, 1 << m):
        top = S.bit_length() - 1
        base = int(table[S & ~(1 << top)])
        adj = [0] * n
        for i, (u, v) in enumerate(edges):
            if S >> i & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        if base == 1:
            table[S] = 2
        elif base == 2:
            table[S] = 2 if _is_bipartite(adj, n) else 3
        else:
            table[S] = base if colorable_from_adjacency(adj, n, base) else base + 1
    return table


@lru_cache(maxsize=32)
def _chi_counts(G: Graph) -> dict[int, list[int]]:
    """Number of masks with each (chi, |S|) pair."""
    table = chi_table(G)
    idx = np.arange(1 << G.m, dtype=np.int64)
    pop = np.zeros_like(idx)
    for i in range(G.m):
        pop += (idx >> i) & 1
    out: dict[int, list[int]] = {}
    for chi in np.unique(table):
        sel = pop[table == chi]
        out[int(chi)] = np.bincount(sel, minlength=G.m + 1).tolist()
    return out


@dataclass(frozen=True)
class ExactDistribution:
    p: Fraction
    support: dict[int, Fraction]

    def tail(self, d: int) -> Fraction:
        return sum((q for v, q in self.support.items() if v <= d), Fraction(0))

    def expectation(self) -> Fraction:
        return sum((v * q for v, q in self.support.items()), Fraction(0))

    def to_json(self) -> dict:
        return {
            "p": str(self.p),
            "support": {str(v): {"exact": str(q), "decimal": float(q)}
                        for v, q in sorted(self.support.items())},
        }


def exact_chi_distribution(G: Graph, p, cap: int = EXACT_EDGE_CAP) -> ExactDistribution:
    q = parse_probability(p)
    _check_cap(G, cap)
    m = G.m
    weights = [q**j * (1 - q) ** (m - j) for j in range(m + 1)]
    support = {}
    for chi, counts in _chi_counts(G).items():
        mass = sum((c * w for c, w in zip(counts, weights) if c), Fraction(0))
        if mass:
            support[chi] = mass
    return ExactDistribution(q, dict(sorted(support.items())))


def exact_tail(G: Graph, p, d: int, cap: int = EXACT_EDGE_CAP) -> Fraction:
    """Pr[chi(G_p) <= d] as an exact rational."""
    return exact_chi_distribution(G, p, cap).tail(d)


def exact_expected_chi(G: Graph, p, cap: int = EXACT_EDGE_CAP) -> Fraction:
    return exact_chi_distribution(G, p, cap).expectation()


# Monte Carlo

@dataclass(frozen=True)
class Estimate:
    point: float
    ci_low: float
    ci_high: float
    trials: int
    successes: int
    seed: int
    confidence: float
    quantity: str = "probability"

    def to_json(self) -> dict:
        return asdict(self)


def score_interval(successes: int, trials: int, confidence: float) -> tuple[float, float]:
    """Two-sided Wilson score interval for a binomial proportion."""
    if trials <= 0:
        return 0.0, 1.0
    z = NormalDist().inv_cdf(0.5 + confidence / 2)
    phat = successes / trials
    z2 = z * z
    denom = 1 + z2 / trials
    centre = (phat + z2 / (2 * trials)) / denom
    half = z / denom * math.sqrt(phat * (1 - phat) / trials + z2 / (4 * trials * trials))
    low, high = max(0.0, centre - half), min(1.0, centre + half)
    # guard the ordering against rounding at phat in {0, 1}
    return min(low, phat), max(high, phat)


def _count_chunk(G: Graph, q: Fraction, d: int, seed: int, start: int, count: int,
                 memo: dict[int, bool]) -> int:
    keep = _keep_matrix(seed, start, count, G.m, q)
    masks = _rows_to_masks(keep)
    hits = 0
    for mask in masks:
        ok = memo.get(mask)
        if ok is None:
            ok = colorable_from_adjacency(G.mask_adjacency(mask), G.n, d)
            memo[mask] = ok
        hits += ok
    return hits


def mc_tail(G: Graph, p, d: int, trials: int, seed: int, confidence: float = 0.95,
            workers: int | None = None) -> Estimate:
    """Monte Carlo estimate of Pr[chi(G_p) <= d] with a score interval."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 < confidence < 1:
        raise ValueError("confidence must lie in (0, 1)")
    q = _loose_probability(p)
    workers = workers or thread_count()
    chunks = [(s, min(CHUNK, trials - s)) for s in range(0, trials, CHUNK)]
    memo: dict[int, bool] = {}
    if workers == 1 or len(chunks) == 1:
        hits = sum(_count_chunk(G, q, d, seed, s, c, memo) for s, c in chunks)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            hits = sum(pool.map(lambda sc: _count_chunk(G, q, d, seed, sc[0], sc[1], memo), chunks))
    low, high = score_interval(hits, trials, confidence)
    return Estimate(hits / trials, low, high, trials, hits, seed, confidence)


def mc_expected_chi(G: Graph, p, trials: int, seed: int) -> float:
    q = _loose_probability(p)
    memo: dict[int, int] = {}
    total = 0
    for start in range(0, trials, CHUNK):
        count = min(CHUNK, trials - start)
        for mask in _rows_to_masks(_keep_matrix(seed, start, count, G.m, q)):
            chi = memo.get(mask)
            if chi is None:
                chi = chromatic_from_adjacency(G.mask_adjacency(mask), G.n)
                memo[mask] = chi
            total += chi
    return total / trials


# product bound

def check_product_bound(G: Graph, cap: int = EXACT_EDGE_CAP, samples: int = 2000,
                        seed: int = 0) -> tuple[bool, EdgeSubset | None]:
    """Check chi(H) * chi(complement of H in G) >= chi(G) over edge splits.

    Exhaustive over all 2^|E| splits when |E| <= cap, otherwise over
    ``samples`` uniformly drawn splits.  Returns the first failing split.
    """
    k = chromatic_number(G).value
    full = G.full_mask
    if G.m <= cap:
        table = chi_table(G).astype(np.int64)
        prod = table * table[::-1]  # index full ^ S == reversed index
        bad = np.nonzero(prod < k)[0]
        if bad.size:
            return False, EdgeSubset(G, int(bad[0]))
        return True, None
    keep = _keep_matrix(seed, 0, samples, G.m, Fraction(1, 2))
    for S in _rows_to_masks(keep):
        a = chromatic_from_adjacency(G.mask_adjacency(S), G.n)
        b = chromatic_from_adjacency(G.mask_adjacency(full & ~S), G.n)
        if a * b < k:
            return False, EdgeSubset(G, S)
    return True, None
