"""Exact solvers for small graphs.

All routines work on vertex bitmasks (``adj[v]`` is the neighbourhood of
``v``) so they can be driven either from a :class:`Graph` or directly from the
adjacency of an edge-masked subgraph, which is what the percolation
enumerator does millions of times.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Sequence

from .graph import Graph, GraphError, Partition

HADWIGER_CAP = 10


class SolverError(ValueError):
    pass


@dataclass
class ColoringResult:
    """Exact optimum plus a witness that realises it.

    ``witness`` is a :class:`Partition` (colourings), a vertex list
    (independent sets) or a list of branch sets (minor models).
    """

    value: int
    witness: Any = None
    nodes_explored: int = 0
    extra: dict = field(default_factory=dict)


def _bits(x: int):
    while x:
        b = x & -x
        yield b.bit_length() - 1
        x ^= b


# colouring

def _greedy_clique(adj: Sequence[int], n: int) -> int:
    best = 1 if n else 0
    for start in range(n):
        clique, cand = 1, adj[start]
        while cand:
            v = max(_bits(cand), key=lambda u: (adj[u] & cand).bit_count())
            clique += 1
            cand &= adj[v]
        best = max(best, clique)
    return best


def _dsatur_greedy(adj: Sequence[int], n: int) -> list[int]:
    colors = [-1] * n
    classes: list[int] = []
    uncolored = (1 << n) - 1
    while uncolored:
        best_v, best_key = -1, None
        for v in _bits(uncolored):
            sat = sum(1 for c in classes if adj[v] & c)
            key = (sat, (adj[v] & uncolored).bit_count())
            if best_key is None or key > best_key:
                best_v, best_key = v, key
        v = best_v
        for c, members in enumerate(classes):
            if not adj[v] & members:
                break
        else:
            c = len(classes)
            classes.append(0)
        classes[c] |= 1 << v
        colors[v] = c
        uncolored &= ~(1 << v)
    return colors


def _color_search(adj: Sequence[int], n: int, d: int, stats: list[int] | None = None) -> list[int] | None:
    """Backtracking DSATUR search for a proper colouring with at most ``d`` colours.

    A new colour is only ever opened as the next unused index, which removes
    the ``d!`` relabelling symmetry.
    """
    if n == 0:
        return []
    if d <= 0:
        return None
    colors = [-1] * n
    classes = [0] * d

    def rec(uncolored: int, used: int) -> bool:
        if stats is not None:
            stats[0] += 1
        if not uncolored:
            return True
        pick, pick_opts, pick_key = -1, None, None
        for v in _bits(uncolored):
            a = adj[v]
            opts = [c for c in range(used) if not a & classes[c]]
            nopts = len(opts) + (used < d)
            if nopts == 0:
                return False
            key = (-nopts, (a & uncolored).bit_count())
            if pick_key is None or key > pick_key:
                pick, pick_opts, pick_key = v, opts, key
        v, bit = pick, 1 << pick
        rest = uncolored & ~bit
        for c in pick_opts:
            classes[c] |= bit
            colors[v] = c
            if rec(rest, used):
                return True
            classes[c] &= ~bit
        if used < d:
            classes[used] |= bit
            colors[v] = used
            if rec(rest, used + 1):
                return True
            classes[used] &= ~bit
        colors[v] = -1
        return False

    return colors if rec((1 << n) - 1, 0) else None


def _is_bipartite(adj: Sequence[int], n: int) -> bool:
    side = [-1] * n
    for s in range(n):
        if side[s] >= 0:
            continue
        side[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in _bits(adj[u]):
                if side[w] < 0:
                    side[w] = side[u] ^ 1
                    stack.append(w)
                elif side[w] == side[u]:
                    return False
    return True


def chromatic_from_adjacency(adj: Sequence[int], n: int, lower: int = 0) -> int:
    """Chromatic number from bitmask adjacency; ``lower`` is a known lower bound."""
    if n == 0:
        return 0
    if not any(adj):
        return 1
    if lower <= 2 and _is_bipartite(adj, n):
        return 2
    lb = max(3, lower, _greedy_clique(adj, n))
    ub = max(_dsatur_greedy(adj, n)) + 1
    for k in range(lb, ub):
        if _color_search(adj, n, k) is not None:
            return k
    return ub


def colorable_from_adjacency(adj: Sequence[int], n: int, d: int) -> bool:
    if n == 0:
        return True
    if d <= 0:
        return False
    if not any(adj):
        return True
    if d == 1:
        return False
    if d == 2:
        return _is_bipartite(adj, n)
    return _color_search(adj, n, d) is not None


def is_proper(G: Graph, labels: Sequence[int]) -> bool:
    return all(labels[u] != labels[v] for u, v in G.edges)


def is_d_colorable(G: Graph, d: int) -> tuple[bool, Partition | None]:
    """Decide whether ``G`` has a proper colouring with at most ``d`` colours."""
    if d < 1:
        raise SolverError("d must be >= 1")
    colors = _color_search(G.adjacency, G.n, d)
    if colors is None:
        return False, None
    return True, Partition.from_labels(colors)


def chromatic_number(G: Graph) -> ColoringResult:
    adj, n = G.adjacency, G.n
    if n == 0:
        return ColoringResult(0, Partition(0, []))
    stats = [0]
    greedy = _dsatur_greedy(adj, n)
    ub = max(greedy) + 1
    lb = _greedy_clique(adj, n)
    for k in range(lb, ub):
        colors = _color_search(adj, n, k, stats)
        if colors is not None:
            return ColoringResult(k, Partition.from_labels(colors), stats[0])
    return ColoringResult(ub, Partition.from_labels(greedy), stats[0])


# independence number

def _mis(adj: Sequence[int], cand: int, stats: list[int]) -> int:
    stats[0] += 1
    chosen = 0
    # vertices of degree <= 1 inside cand are always safe to take
    while cand:
        for v in _bits(cand):
            if (adj[v] & cand).bit_count() <= 1:
                chosen |= 1 << v
                cand &= ~(adj[v] | 1 << v)
                break
        else:
            break
    if not cand:
        return chosen
    v = max(_bits(cand), key=lambda u: (adj[u] & cand).bit_count())
    with_v = (1 << v) | _mis(adj, cand & ~(adj[v] | 1 << v), stats)
    without_v = _mis(adj, cand & ~(1 << v), stats)
    best = with_v if with_v.bit_count() >= without_v.bit_count() else without_v
    return chosen | best


def independence_number(G: Graph) -> ColoringResult:
    stats = [0]
    best = _mis(G.adjacency, (1 << G.n) - 1, stats)
    witness = list(_bits(best))
    return ColoringResult(len(witness), witness, stats[0])


# monochromatic edges

def count_monochromatic(G: Graph, labels: Sequence[int]) -> int:
    return sum(1 for u, v in G.edges if labels[u] == labels[v])


def min_monochromatic_edges(G: Graph, c: int) -> ColoringResult:
    """Fewest monochromatic edges over all colourings with at most ``c`` colours.

    Vertices are assigned in index order with restricted-growth labels, so the
    first optimum reached is the lexicographically smallest label vector.
    """
    if c < 1:
        raise SolverError("colour budget must be >= 1")
    n, adj = G.n, G.adjacency
    if n == 0:
        return ColoringResult(0, Partition(0, []))
    # earlier neighbours of each vertex, the only ones already labelled when it is reached
    back = [adj[v] & ((1 << v) - 1) for v in range(n)]

    greedy = [0] * n
    for v in range(n):
        counts = [0] * c
        for u in _bits(back[v]):
            counts[greedy[u]] += 1
        greedy[v] = min(range(c), key=lambda b: counts[b])
    best_val = count_monochromatic(G, greedy) + 1
    best_labels: list[int] | None = None

    labels = [-1] * n
    blocks = [0] * c
    nodes = 0

    def lower_bound(v: int, opened: int) -> int:
        if opened < c:
            return 0
        total = 0
        for u in range(v, n):
            a = adj[u]
            total += min((a & blocks[b]).bit_count() for b in range(opened))
        return total

    def rec(v: int, opened: int, cost: int) -> None:
        nonlocal best_val, best_labels, nodes
        nodes += 1
        if cost + lower_bound(v, opened) >= best_val:
            return
        if v == n:
            best_val, best_labels = cost, labels.copy()
            return
        bit = 1 << v
        for b in range(min(opened + 1, c)):
            add = (back[v] & blocks[b]).bit_count()
            labels[v] = b
            blocks[b] |= bit
            rec(v + 1, max(opened, b + 1), cost + add)
            blocks[b] &= ~bit
        labels[v] = -1

    rec(0, 0, 0)
    assert best_labels is not None
    return ColoringResult(best_val, Partition.from_labels(best_labels), nodes,
                          {"labels": best_labels})


# critical subgraphs

def critical_subgraph(G: Graph, k: int | None = None) -> Graph:
    """A k-critical subgraph of ``G`` with isolated vertices removed.

    Edges are tried for deletion in canonical order until a full pass deletes
    nothing.  Surviving vertices are relabelled in increasing order.
    """
    chi = chromatic_number(G).value
    if k is None:
        k = chi
    if k != chi:
        raise SolverError(f"chromatic number is {chi}, not {k}")
    if k <= 1:
        return Graph(k)
    mask = G.full_mask
    changed = True
    while changed:
        changed = False
        for i in range(G.m):
            if not mask >> i & 1:
                continue
            trial = mask & ~(1 << i)
            if not colorable_from_adjacency(G.mask_adjacency(trial), G.n, k - 1):
                mask = trial
                changed = True
    kept = G.edge_subgraph(mask)
    alive = [v for v in range(G.n) if kept.adjacency[v]]
    return kept.induced_subgraph(alive)


def is_critical(G: Graph, k: int) -> bool:
    if chromatic_number(G).value != k:
        return False
    return all(colorable_from_adjacency(G.mask_adjacency(G.full_mask & ~(1 << i)), G.n, k - 1)
               for i in range(G.m))


# Hadwiger number

def _connected(adj: Sequence[int], s: int) -> bool:
    if not s:
        return False
    low = s & -s
    seen, frontier = low, low
    while frontier:
        b = frontier & -frontier
        frontier ^= b
        new = adj[b.bit_length() - 1] & s & ~seen
        seen |= new
        frontier |= new
    return seen == s


def _neighbourhood(adj: Sequence[int], s: int) -> int:
    out = 0
    for v in _bits(s):
        out |= adj[v]
    return out & ~s


def _largest_clique_minor(adj: Sequence[int], comp: int, stats: list[int]) -> list[int]:
    """Largest partition of the connected vertex set ``comp`` into connected,
    pairwise adjacent blocks.  For a connected graph this is the Hadwiger
    number: unused vertices of any minor model can be absorbed into a
    neighbouring branch set without breaking it."""
    best: list[int] = [comp]

    def rec(remaining: int, blocks: list[int], nbrs: list[int]) -> None:
        nonlocal best
        stats[0] += 1
        if not remaining:
            if len(blocks) > len(best):
                best = blocks.copy()
            return
        if len(blocks) + remaining.bit_count() <= len(best):
            return
        low = remaining & -remaining
        others = list(_bits(remaining & ~low))
        for sub in range(1 << len(others)):
            block = low
            for j, v in enumerate(others):
                if sub >> j & 1:
                    block |= 1 << v
            if not _connected(adj, block):
                continue
            if any(not nb & block for nb in nbrs):
                continue
            blocks.append(block)
            nbrs.append(_neighbourhood(adj, block))
            rec(remaining & ~block, blocks, nbrs)
            blocks.pop()
            nbrs.pop()

    rec(comp, [], [])
    return best


def hadwiger_number(G: Graph, cap: int = HADWIGER_CAP) -> ColoringResult:
    if G.n > cap:
        raise SolverError(f"hadwiger_number is exact only for n <= {cap}, got n={G.n}")
    if G.n == 0:
        return ColoringResult(0, [])
    stats = [0]
    best: list[int] = []
    for comp in G.components():
        model = _largest_clique_minor(G.adjacency, comp, stats)
        if len(model) > len(best):
            best = model
    return ColoringResult(len(best), [sorted(_bits(b)) for b in best], stats[0])


def is_minor_model(G: Graph, branch_sets: Sequence[Sequence[int]]) -> bool:
    """Check disjoint, connected, pairwise adjacent branch sets."""
    masks = []
    used = 0
    for bs in branch_sets:
        m = 0
        for v in bs:
            if not 0 <= v < G.n:
                return False
            m |= 1 << v
        if not m or m & used or not _connected(G.adjacency, m):
            return False
        used |= m
        masks.append(m)
    nbrs = [_neighbourhood(G.adjacency, m) for m in masks]
    return all(nbrs[i] & masks[j] for i in range(len(masks)) for j in range(i + 1, len(masks)))


__all__ = [
    "ColoringResult",
    "SolverError",
    "GraphError",
    "chromatic_from_adjacency",
    "chromatic_number",
    "colorable_from_adjacency",
    "count_monochromatic",
    "critical_subgraph",
    "hadwiger_number",
    "independence_number",
    "is_critical",
    "is_d_colorable",
    "is_minor_model",
    "is_proper",
    "min_monochromatic_edges",
]
