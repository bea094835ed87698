"""Graph representation, generators, edge-subset primitives and DIMACS I/O.

Vertices are dense integers ``0..n-1``.  Edges are stored as ``(u, v)`` pairs
with ``u < v`` in lexicographic order; that order is the canonical edge
ordering every edge mask in the package refers to.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import cached_property
from itertools import combinations
from typing import Iterable, Iterator, Sequence

import numpy as np


class GraphError(ValueError):
    """Invalid graph construction or operation."""


class DimacsFormatError(GraphError):
    pass


class Graph:
    """Immutable undirected simple graph with a canonical edge order."""

    __slots__ = ("_n", "_edges", "__dict__")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        seen = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge ({u}, {v}) out of range for n={n}")
            e = (u, v) if u < v else (v, u)
            if e in seen:
                raise GraphError(f"duplicate edge {e}")
            seen.add(e)
        self._n = n
        self._edges = tuple(sorted(seen))

    @property
    def n(self) -> int:
        return self._n

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self._edges

    @property
    def m(self) -> int:
        return len(self._edges)

    @cached_property
    def adjacency(self) -> tuple[int, ...]:
        """Neighbourhood bitmask per vertex."""
        adj = [0] * self._n
        for u, v in self._edges:
            adj[u] |= 1 << v
            adj[v] |= 1 << u
        return tuple(adj)

    @cached_property
    def edge_index(self) -> dict[tuple[int, int], int]:
        return {e: i for i, e in enumerate(self._edges)}

    @property
    def full_mask(self) -> int:
        return (1 << self.m) - 1

    def degree(self, v: int) -> int:
        return self.adjacency[v].bit_count()

    def degrees(self) -> list[int]:
        return [a.bit_count() for a in self.adjacency]

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adjacency[u] >> v & 1)

    def edges_of(self, mask: int) -> list[tuple[int, int]]:
        return [e for i, e in enumerate(self._edges) if mask >> i & 1]

    def edge_subgraph(self, mask: int) -> "Graph":
        """Spanning subgraph keeping the edges selected by ``mask``."""
        return Graph(self._n, self.edges_of(mask))

    def mask_adjacency(self, mask: int) -> list[int]:
        adj = [0] * self._n
        for i, (u, v) in enumerate(self._edges):
            if mask >> i & 1:
                adj[u] |= 1 << v
                adj[v] |= 1 << u
        return adj

    def induced_subgraph(self, vertices: Iterable[int]) -> "Graph":
        """Induced subgraph, relabelled to ``0..len(vertices)-1`` in sorted order."""
        keep = sorted(set(vertices))
        relabel = {v: i for i, v in enumerate(keep)}
        return Graph(len(keep), [(relabel[u], relabel[v]) for u, v in self._edges
                                 if u in relabel and v in relabel])

    def components(self) -> list[int]:
        """Connected components as vertex bitmasks, ordered by smallest vertex."""
        adj = self.adjacency
        remaining = (1 << self._n) - 1
        comps = []
        while remaining:
            low = remaining & -remaining
            comp, frontier = low, low
            while frontier:
                b = frontier & -frontier
                frontier ^= b
                new = adj[b.bit_length() - 1] & ~comp
                comp |= new
                frontier |= new
            comps.append(comp)
            remaining &= ~comp
        return comps

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(n={self._n}, m={self.m})"


def _check_vertices(G: Graph, A: Iterable[int]) -> frozenset[int]:
    A = frozenset(int(v) for v in A)
    bad = [v for v in A if not 0 <= v < G.n]
    if bad:
        raise GraphError(f"vertices {sorted(bad)} not in graph with n={G.n}")
    return A


def _to_bits(A: Iterable[int]) -> int:
    bits = 0
    for v in A:
        bits |= 1 << v
    return bits


@dataclass(frozen=True)
class EdgeSubset:
    """A set of edges of ``graph`` encoded as a mask over its canonical order."""

    graph: Graph
    mask: int

    def __post_init__(self):
        if self.mask < 0 or self.mask >> self.graph.m:
            raise GraphError("mask has bits beyond the graph's edge count")

    @property
    def size(self) -> int:
        return self.mask.bit_count()

    def edges(self) -> list[tuple[int, int]]:
        return self.graph.edges_of(self.mask)

    def _same_owner(self, other: "EdgeSubset") -> None:
        if self.graph is not other.graph and self.graph != other.graph:
            raise GraphError("edge subsets belong to different graphs")

    def __and__(self, other: "EdgeSubset") -> "EdgeSubset":
        self._same_owner(other)
        return EdgeSubset(self.graph, self.mask & other.mask)

    def __or__(self, other: "EdgeSubset") -> "EdgeSubset":
        self._same_owner(other)
        return EdgeSubset(self.graph, self.mask | other.mask)

    def issubset(self, other: "EdgeSubset") -> bool:
        self._same_owner(other)
        return self.mask & ~other.mask == 0

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"EdgeSubset({self.edges()})"


class Partition:
    """Set partition of ``range(n)`` into nonempty unlabelled blocks."""

    __slots__ = ("n", "blocks")

    def __init__(self, n: int, blocks: Iterable[Iterable[int]], limit: int | None = None):
        blocks = [frozenset(b) for b in blocks]
        covered: set[int] = set()
        for b in blocks:
            if not b:
                raise GraphError("partition blocks must be nonempty")
            if covered & b:
                raise GraphError("partition blocks overlap")
            covered |= b
        if covered != set(range(n)):
            raise GraphError("partition blocks do not cover the vertex set")
        if limit is not None and len(blocks) > limit:
            raise GraphError(f"partition has {len(blocks)} blocks, limit is {limit}")
        self.n = n
        self.blocks = frozenset(blocks)

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict[int, list[int]] = {}
        for v, c in enumerate(labels):
            groups.setdefault(c, []).append(v)
        return cls(len(labels), groups.values())

    def labels(self) -> list[int]:
        """Canonical colour vector: blocks numbered by their smallest vertex."""
        out = [0] * self.n
        for i, b in enumerate(sorted(self.blocks, key=min)):
            for v in b:
                out[v] = i
        return out

    def sorted_blocks(self) -> list[list[int]]:
        return [sorted(b) for b in sorted(self.blocks, key=min)]

    def __len__(self) -> int:
        return len(self.blocks)

    def __iter__(self) -> Iterator[frozenset[int]]:
        return iter(sorted(self.blocks, key=min))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Partition):
            return NotImplemented
        return self.n == other.n and self.blocks == other.blocks

    def __hash__(self) -> int:
        return hash((self.n, self.blocks))

    def __repr__(self) -> str:
        return f"Partition({self.sorted_blocks()})"


# generators

def complete(k: int) -> Graph:
    if k < 1:
        raise GraphError("complete graph needs k >= 1")
    return Graph(k, combinations(range(k), 2))


def cycle(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycle needs n >= 3")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def path(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def empty(n: int) -> Graph:
    return Graph(n)


def complete_multipartite(sizes: Sequence[int]) -> Graph:
    if not sizes or any(s < 1 for s in sizes):
        raise GraphError("sizes must be a nonempty list of positive integers")
    part = []
    for i, s in enumerate(sizes):
        part.extend([i] * s)
    n = len(part)
    return Graph(n, [(u, v) for u, v in combinations(range(n), 2) if part[u] != part[v]])


def petersen() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)


def disjoint_union(G: Graph, H: Graph) -> Graph:
    return Graph(G.n + H.n, list(G.edges) + [(u + G.n, v + G.n) for u, v in H.edges])


def clique_with_path(k: int, length: int) -> Graph:
    """K_k with a pendant path of ``length`` extra edges hanging off vertex ``k-1``."""
    edges = list(complete(k).edges)
    prev = k - 1
    for i in range(length):
        edges.append((prev, k + i))
        prev = k + i
    return Graph(k + length, edges)


def gnp(n: int, p: float, seed: int) -> Graph:
    """Erdos-Renyi G(n, p); each pair kept independently, reproducible from ``seed``."""
    if not 0 <= p <= 1:
        raise GraphError(f"p must lie in [0, 1], got {p}")
    pairs = list(combinations(range(n), 2))
    rng = np.random.default_rng(seed)
    keep = rng.random(len(pairs)) < p
    return Graph(n, [e for e, k in zip(pairs, keep) if k])


# edge primitives

def induced_edges(G: Graph, A: Iterable[int]) -> EdgeSubset:
    """Edges with both endpoints in ``A``."""
    bits = _to_bits(_check_vertices(G, A))
    mask = 0
    for i, (u, v) in enumerate(G.edges):
        if bits >> u & 1 and bits >> v & 1:
            mask |= 1 << i
    return EdgeSubset(G, mask)


def cut(G: Graph, A: Iterable[int], B: Iterable[int]) -> EdgeSubset:
    """Edges with one endpoint in ``A`` and the other in ``B``."""
    A, B = _check_vertices(G, A), _check_vertices(G, B)
    if A & B:
        raise GraphError("cut requires disjoint vertex sets")
    a, b = _to_bits(A), _to_bits(B)
    mask = 0
    for i, (u, v) in enumerate(G.edges):
        if (a >> u & 1 and b >> v & 1) or (b >> u & 1 and a >> v & 1):
            mask |= 1 << i
    return EdgeSubset(G, mask)


def complement_within(G: Graph, H: EdgeSubset) -> EdgeSubset:
    if H.graph is not G and H.graph != G:
        raise GraphError("edge subset belongs to a different graph")
    return EdgeSubset(G, G.full_mask & ~H.mask)


# DIMACS

def write_dimacs(G: Graph, path: str | os.PathLike, comment: str | None = None) -> None:
    with open(path, "w") as fh:
        fh.write(format_dimacs(G, comment))


def format_dimacs(G: Graph, comment: str | None = None) -> str:
    lines = []
    if comment:
        lines.extend(f"c {c}" for c in comment.splitlines())
    lines.append(f"p edge {G.n} {G.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in G.edges)
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> Graph:
    header = None
    edges: list[tuple[int, int]] = []
    seen: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        parts = raw.split()
        if not parts or parts[0] == "c":
            continue
        tag = parts[0]
        if tag == "p":
            if header is not None:
                raise DimacsFormatError(f"line {lineno}: second problem line")
            if len(parts) != 4 or parts[1] not in ("edge", "col"):
                raise DimacsFormatError(f"line {lineno}: malformed header {raw.strip()!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise DimacsFormatError(f"line {lineno}: non-integer header fields") from None
            if header[0] < 0 or header[1] < 0:
                raise DimacsFormatError(f"line {lineno}: negative header fields")
        elif tag == "e":
            if header is None:
                raise DimacsFormatError(f"line {lineno}: edge before problem line")
            if len(parts) != 3:
                raise DimacsFormatError(f"line {lineno}: malformed edge line")
            try:
                u, v = int(parts[1]), int(parts[2])
            except ValueError:
                raise DimacsFormatError(f"line {lineno}: non-integer vertex") from None
            n = header[0]
            if not (1 <= u <= n and 1 <= v <= n):
                raise DimacsFormatError(f"line {lineno}: vertex index out of range 1..{n}")
            if u == v:
                raise DimacsFormatError(f"line {lineno}: self-loop at vertex {u}")
            e = (min(u, v) - 1, max(u, v) - 1)
            if e in seen:
                raise DimacsFormatError(f"line {lineno}: duplicate edge {u} {v}")
            seen.add(e)
            edges.append(e)
        else:
            raise DimacsFormatError(f"line {lineno}: unknown line type {tag!r}")
    if header is None:
        raise DimacsFormatError("missing 'p edge n m' header")
    if len(edges) != header[1]:
        raise DimacsFormatError(f"header declares {header[1]} edges, found {len(edges)}")
    return Graph(header[0], edges)


def read_dimacs(path: str | os.PathLike) -> Graph:
    with open(path) as fh:
        return parse_dimacs(fh.read())
