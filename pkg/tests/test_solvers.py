import math
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from percolor.graph import Graph, complete, cycle, disjoint_union, petersen
from percolor.solvers import (
    SolverError,
    chromatic_number,
    count_monochromatic,
    critical_subgraph,
    hadwiger_number,
    independence_number,
    is_critical,
    is_d_colorable,
    is_minor_model,
    is_proper,
    min_monochromatic_edges,
)
from oracles import (
    balanced_clique_mono,
    brute_alpha,
    brute_chi,
    brute_hadwiger,
    brute_min_mono,
)
from test_graph import graphs


def c5_pendant():
    return Graph(6, list(cycle(5).edges) + [(0, 5)])


@pytest.mark.parametrize("G,d,expected", [
    (cycle(5), 2, False),
    (cycle(5), 3, True),
    (petersen(), 3, True),
    (petersen(), 2, False),
    (complete(4), 3, False),
])
def test_is_d_colorable(G, d, expected):
    ok, witness = is_d_colorable(G, d)
    assert ok is expected
    if ok:
        assert len(witness) <= d and is_proper(G, witness.labels())
    else:
        assert witness is None


def test_is_d_colorable_rejects_zero():
    with pytest.raises(SolverError):
        is_d_colorable(cycle(5), 0)


@pytest.mark.parametrize("G,chi", [(complete(5), 5), (cycle(5), 3), (petersen(), 3),
                                   (Graph(4), 1), (Graph(0), 0)])
def test_chromatic_number(G, chi):
    res = chromatic_number(G)
    assert res.value == chi == brute_chi(G.n, G.edges)
    assert is_proper(G, res.witness.labels()) and len(res.witness) == chi


@pytest.mark.parametrize("G,alpha", [(complete(5), 1), (cycle(5), 2), (petersen(), 4)])
def test_independence_number(G, alpha):
    res = independence_number(G)
    assert res.value == alpha == brute_alpha(G.n, G.edges)
    S = set(res.witness)
    assert len(S) == alpha and not any(u in S and v in S for u, v in G.edges)


@pytest.mark.parametrize("G,c,value", [(complete(5), 2, 4), (cycle(5), 2, 1), (petersen(), 3, 0)])
def test_min_monochromatic_examples(G, c, value):
    res = min_monochromatic_edges(G, c)
    assert res.value == value == brute_min_mono(G.n, G.edges, c)
    assert count_monochromatic(G, res.extra["labels"]) == value


@pytest.mark.parametrize("G,c", [(cycle(5), 2), (complete(5), 2), (petersen(), 2), (c5_pendant(), 2)])
def test_min_monochromatic_tie_break_is_lexicographic(G, c):
    best = min(brute_min_mono(G.n, G.edges, c), G.m)
    lex_first = next(col for col in product(range(c), repeat=G.n)
                     if count_monochromatic(G, col) == best)
    assert min_monochromatic_edges(G, c).extra["labels"] == list(lex_first)


def test_min_monochromatic_zero_at_chromatic_budget(corpus):
    for G in corpus.values():
        k = chromatic_number(G).value
        assert min_monochromatic_edges(G, k).value == 0
        assert min_monochromatic_edges(G, k + 2).value == 0


@pytest.mark.parametrize("k", range(2, 9))
@pytest.mark.parametrize("c", [1, 2, 3, 4])
def test_min_monochromatic_cliques_closed_form(k, c):
    assert min_monochromatic_edges(complete(k), c).value == balanced_clique_mono(k, c)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=7), st.integers(1, 4))
def test_min_monochromatic_matches_brute_force(G, c):
    assert min_monochromatic_edges(G, c).value == brute_min_mono(G.n, G.edges, c)


@settings(max_examples=80, deadline=None)
@given(graphs(max_n=8))
def test_solver_invariants(G):
    chi = chromatic_number(G).value
    alpha = independence_number(G).value
    assert chi == brute_chi(G.n, G.edges)
    assert alpha == brute_alpha(G.n, G.edges)
    assert chi * alpha >= G.n
    assert G.m >= math.comb(chi, 2)
    for c in range(1, chi + 1):
        mono = min_monochromatic_edges(G, c).value
        assert (mono == 0) == is_d_colorable(G, c)[0]
        # d^3 := c form of the counting argument
        assert 2 * c * mono >= chi * (chi - c)


def test_critical_subgraph_examples():
    K5 = complete(5)
    assert critical_subgraph(K5, 5) == K5
    assert critical_subgraph(disjoint_union(K5, Graph(1)), 5) == K5
    H = critical_subgraph(c5_pendant(), 3)
    assert H == cycle(5)
    assert min(H.degrees()) >= 2
    with pytest.raises(SolverError):
        critical_subgraph(K5, 4)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7))
def test_critical_subgraph_properties(G):
    k = chromatic_number(G).value
    H = critical_subgraph(G)
    assert chromatic_number(H).value == k
    assert is_critical(H, k)
    if k >= 2:
        assert min(H.degrees()) >= k - 1
        assert H.m >= math.comb(k, 2)


@pytest.mark.parametrize("G", [complete(5), cycle(5), complete(4), Graph(3, [(0, 1)]),
                               disjoint_union(complete(3), cycle(5))])
def test_hadwiger_matches_minor_oracle(G):
    res = hadwiger_number(G)
    assert res.value == brute_hadwiger(G.n, G.edges)
    assert is_minor_model(G, res.witness) and len(res.witness) == res.value


def test_hadwiger_petersen_is_five():
    # 6 branch sets need 15 cross edges plus internal edges; Petersen has 15 edges
    res = hadwiger_number(petersen())
    assert res.value == 5 == brute_hadwiger(10, petersen().edges)
    assert is_minor_model(petersen(), res.witness)


def test_hadwiger_cap():
    with pytest.raises(SolverError):
        hadwiger_number(cycle(11))
    assert hadwiger_number(cycle(11), cap=11).value == 3


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=7))
def test_hadwiger_random_against_oracle(G):
    h = hadwiger_number(G).value
    assert h == brute_hadwiger(G.n, G.edges)
    assert h >= chromatic_number(G).value


def test_corpus_hadwiger_at_least_chi(corpus):
    for G in corpus.values():
        if G.n <= 10:
            assert hadwiger_number(G).value >= chromatic_number(G).value
