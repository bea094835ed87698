"""Uncut-edge families over vertex partitions and their monotone closures.

For a partition A of V, ``uncut(A)`` is the set of edges inside its blocks.
G_1/2 is d-colourable exactly when the removed edge set contains some
``uncut(A)`` with at most d blocks, so the size of the upward closure of
these sets, divided by 2^|E|, is Pr[chi(G_1/2) <= d].
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator

import numpy as np

from .bounds import BoundReport, LOG2_GOLDEN_CONJUGATE, compare
from .graph import EdgeSubset, Graph, GraphError, Partition
from .solvers import min_monochromatic_edges

PARTITION_CAP = 14
CLOSURE_CAP = 24


class FamilyError(ValueError):
    pass


@dataclass(frozen=True)
class SetFamily:
    """Deduplicated edge-subset masks over one graph's edge set."""

    graph: Graph
    masks: tuple[int, ...]

    @classmethod
    def from_masks(cls, graph: Graph, masks: Iterable[int]) -> "SetFamily":
        full = graph.full_mask
        uniq = sorted(set(masks))
        if any(m < 0 or m & ~full for m in uniq):
            raise FamilyError("mask outside the graph's edge set")
        return cls(graph, tuple(uniq))

    @classmethod
    def from_subsets(cls, graph: Graph, subsets: Iterable[EdgeSubset]) -> "SetFamily":
        masks = []
        for s in subsets:
            if s.graph is not graph and s.graph != graph:
                raise FamilyError("edge subset belongs to a different graph")
            masks.append(s.mask)
        return cls.from_masks(graph, masks)

    @property
    def ground_size(self) -> int:
        return self.graph.m

    def members(self) -> list[EdgeSubset]:
        return [EdgeSubset(self.graph, m) for m in self.masks]

    def __len__(self) -> int:
        return len(self.masks)

    def __contains__(self, s: EdgeSubset) -> bool:
        return s.mask in set(self.masks)


def uncut_mask(G: Graph, labels) -> int:
    mask = 0
    for i, (u, v) in enumerate(G.edges):
        if labels[u] == labels[v]:
            mask |= 1 << i
    return mask


def uncut(G: Graph, partition: Partition) -> EdgeSubset:
    """Edges of ``G`` with both endpoints in one block of ``partition``."""
    if not isinstance(partition, Partition):
        raise GraphError("uncut needs a Partition")
    if partition.n != G.n:
        raise GraphError(f"partition covers {partition.n} vertices, graph has {G.n}")
    return EdgeSubset(G, uncut_mask(G, partition.labels()))


def _label_vectors(n: int, d: int) -> Iterator[list[int]]:
    """Restricted growth strings of length n with at most d distinct values."""
    if n == 0:
        yield []
        return
    labels = [0] * n

    def rec(i: int, used: int):
        if i == n:
            yield labels
            return
        for b in range(min(used + 1, d)):
            labels[i] = b
            yield from rec(i + 1, max(used, b + 1))

    yield from rec(1, 1)


def _check_partition_cap(G: Graph, d: int, cap: int) -> None:
    if d < 1:
        raise FamilyError("d must be >= 1")
    if G.n > cap:
        raise FamilyError(f"partition enumeration needs n <= {cap}, graph has n={G.n}")


def enumerate_partitions(G: Graph, d: int, cap: int = PARTITION_CAP) -> Iterator[Partition]:
    """Every set partition of V(G) into at most d nonempty blocks, once each."""
    _check_partition_cap(G, d, cap)
    for labels in _label_vectors(G.n, d):
        yield Partition.from_labels(labels)


def uncut_family(G: Graph, d: int, cap: int = PARTITION_CAP) -> SetFamily:
    _check_partition_cap(G, d, cap)
    return SetFamily.from_masks(G, {uncut_mask(G, lab) for lab in _label_vectors(G.n, d)})


def minimal_members(family: SetFamily) -> list[int]:
    """Inclusion-minimal masks, smallest first."""
    out: list[int] = []
    for m in sorted(family.masks, key=lambda x: (x.bit_count(), x)):
        if not any(k & ~m == 0 for k in out):
            out.append(m)
    return out


def monotone_closure_count(family: SetFamily, cap: int = CLOSURE_CAP) -> int:
    """Number of subsets of the ground set containing at least one member."""
    m = family.ground_size
    if m > cap:
        raise FamilyError(f"closure counting needs |E| <= {cap}, family has {m}")
    if not family.masks:
        return 0
    up = np.zeros(1 << m, dtype=bool)
    up[minimal_members(family)] = True
    # superset-sum transform, one coordinate at a time
    for i in range(m):
        view = up.reshape(-1, 2, 1 << i)
        view[:, 1, :] |= view[:, 0, :]
    return int(up.sum())


def closure_fraction(family: SetFamily) -> Fraction:
    return Fraction(monotone_closure_count(family), 1 << family.ground_size)


def min_r_wise_intersection(family: SetFamily, r: int) -> int:
    """min |F_1 & ... & F_r| over r-tuples of members, repetition allowed."""
    if not family.masks:
        raise FamilyError("family is empty")
    if r < 1:
        raise FamilyError("r must be >= 1")
    base = minimal_members(family)
    level = base
    for _ in range(r - 1):
        if any(x == 0 for x in level):
            return 0
        nxt = {x & y for x in level for y in base}
        # supersets can never reach a smaller final intersection
        level = minimal_members(SetFamily(family.graph, tuple(nxt)))
    return min(x.bit_count() for x in level)


def frankl_check(G: Graph, d: int, cap: int = PARTITION_CAP) -> BoundReport:
    """3-wise intersection and closure-size check for the uncut family of ``G``.

    The report carries t* (least 3-wise intersection), the closure count, and
    t(d^3) (least monochromatic edge count over d^3-colourings), and is
    compared against the closure fraction |U| / 2^|E|.
    """
    fam = uncut_family(G, d, cap)
    t_star = min_r_wise_intersection(fam, 3)
    closure = monotone_closure_count(fam)
    t_d3 = min_monochromatic_edges(G, d**3).value
    report = BoundReport(
        "frankl",
        {"d": d, "n": G.n, "m": G.m},
        t_star * LOG2_GOLDEN_CONJUGATE,
        details={
            "t_star": t_star,
            "closure_count": closure,
            "t_d3": t_d3,
            "family_size": len(fam),
            "intersection_claim_holds": t_star >= t_d3,
        },
    )
    return compare(report, Fraction(closure, 1 << G.m))
