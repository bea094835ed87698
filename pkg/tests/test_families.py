from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from percolor.families import (
    FamilyError,
    SetFamily,
    closure_fraction,
    enumerate_partitions,
    frankl_check,
    min_r_wise_intersection,
    minimal_members,
    monotone_closure_count,
    uncut,
    uncut_family,
)
from percolor.graph import EdgeSubset, Graph, Partition, complete, cycle, path, petersen
from percolor.percolation import exact_tail
from oracles import brute_uncut_closure, stirling2
from test_graph import graphs


@pytest.mark.parametrize("n,d,count", [(2, 2, 2), (3, 2, 4), (3, 3, 5), (4, 2, 8), (1, 5, 1)])
def test_partition_counts(n, d, count):
    parts = list(enumerate_partitions(Graph(n), d))
    assert len(parts) == count == sum(stirling2(n, j) for j in range(1, d + 1))
    assert len(set(parts)) == count
    assert all(len(P) <= d for P in parts)


@pytest.mark.parametrize("n", range(1, 8))
def test_partition_counts_match_bell_prefix(n):
    for d in range(1, n + 1):
        expected = sum(stirling2(n, j) for j in range(1, d + 1))
        assert sum(1 for _ in enumerate_partitions(Graph(n), d)) == expected


def test_partition_cap_and_bad_d():
    with pytest.raises(FamilyError):
        list(enumerate_partitions(Graph(15), 2))
    with pytest.raises(FamilyError):
        list(enumerate_partitions(Graph(3), 0))


def test_uncut_examples():
    K3 = complete(3)
    assert uncut(K3, Partition(3, [[0, 1, 2]])).mask == K3.full_mask
    assert uncut(K3, Partition(3, [[0], [1], [2]])).mask == 0
    P = path(3)  # a - b - c
    assert uncut(P, Partition(3, [[0, 2], [1]])).mask == 0
    assert uncut(P, Partition(3, [[0, 1], [2]])).edges() == [(0, 1)]


def test_uncut_complements_the_cut():
    G = petersen()
    P = Partition(10, [[0, 1, 2, 3, 4], [5, 6, 7, 8, 9]])
    inside = uncut(G, P)
    assert inside.size == 10
    assert all((u < 5) == (v < 5) for u, v in inside.edges())


def test_uncut_rejects_wrong_size():
    with pytest.raises(ValueError):
        uncut(complete(3), Partition(4, [[0, 1, 2, 3]]))


def test_closure_examples():
    K3 = complete(3)
    assert monotone_closure_count(SetFamily.from_masks(K3, [0])) == 8
    assert monotone_closure_count(SetFamily.from_masks(K3, [0b001])) == 4
    assert monotone_closure_count(SetFamily.from_masks(K3, [0b001, 0b010])) == 6
    assert monotone_closure_count(SetFamily.from_masks(K3, [])) == 0
    assert monotone_closure_count(uncut_family(K3, 1)) == 1


def test_closure_cap():
    G = complete(8)
    with pytest.raises(FamilyError):
        monotone_closure_count(SetFamily.from_masks(G, [0]))


def test_set_family_owner_check():
    with pytest.raises(FamilyError):
        SetFamily.from_subsets(complete(3), [EdgeSubset(cycle(4), 1)])
    with pytest.raises(FamilyError):
        SetFamily.from_masks(complete(3), [0b1000])


def test_minimal_members():
    fam = SetFamily.from_masks(complete(3), [0b011, 0b001, 0b110, 0b111])
    assert minimal_members(fam) == [0b001, 0b110]


def test_min_r_wise_examples():
    K3 = complete(3)
    fam = SetFamily.from_masks(K3, [0b011, 0b110])
    assert min_r_wise_intersection(fam, 1) == 2
    assert min_r_wise_intersection(fam, 2) == 1
    assert min_r_wise_intersection(SetFamily.from_masks(K3, [0b001, 0b010]), 2) == 0
    with pytest.raises(FamilyError):
        min_r_wise_intersection(SetFamily.from_masks(K3, []), 2)


def _brute_r_wise(masks, r):
    best = None
    for combo in product(masks, repeat=r):
        x = combo[0]
        for y in combo[1:]:
            x &= y
        best = x.bit_count() if best is None else min(best, x.bit_count())
    return best


@settings(max_examples=50, deadline=None)
@given(st.lists(st.integers(1, 63), min_size=1, max_size=6), st.integers(1, 4))
def test_min_r_wise_matches_brute_force(masks, r):
    fam = SetFamily.from_masks(complete(4), masks)
    assert min_r_wise_intersection(fam, r) == _brute_r_wise(list(set(masks)), r)


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(0, 63), min_size=1, max_size=6))
def test_min_r_wise_non_increasing_in_r(masks):
    fam = SetFamily.from_masks(complete(4), masks)
    values = [min_r_wise_intersection(fam, r) for r in range(1, 5)]
    assert values == sorted(values, reverse=True)


@settings(max_examples=30, deadline=None)
@given(graphs(max_n=6), st.integers(1, 3))
def test_closure_matches_listing_and_exact_tail(G, d):
    if G.m > 10:
        G = Graph(G.n, G.edges[:10])
    fam = uncut_family(G, d)
    count = monotone_closure_count(fam)
    assert count == brute_uncut_closure(G.n, G.edges, d)
    assert closure_fraction(fam) == exact_tail(G, "1/2", d)


def test_closure_corpus_values():
    G = Graph(7, list(complete(4).edges) + [(3, 4), (4, 5), (5, 6)])
    assert [monotone_closure_count(uncut_family(G, d)) for d in (1, 2, 3)] == [1, 328, 504]


def test_frankl_check_k3():
    rep = frankl_check(complete(3), 1)
    assert rep.details["t_star"] == 3
    assert rep.details["closure_count"] == 1
    assert rep.details["t_d3"] == 3
    assert rep.details["intersection_claim_holds"]
    assert rep.verdict == "holds"


def test_frankl_check_c5():
    rep = frankl_check(cycle(5), 2)
    assert rep.details["t_star"] == 0 and rep.details["t_d3"] == 0
    assert rep.log2_value == 0
    assert rep.compared_against["empirical"]["exact"] == "31/32"
    assert rep.verdict == "holds"


@pytest.mark.parametrize("name", ["K4", "K5", "C5", "C7", "Petersen", "K4+P3"])
def test_frankl_check_corpus(corpus, name):
    G = corpus[name]
    for d in (1, 2):
        rep = frankl_check(G, d)
        assert rep.details["intersection_claim_holds"]
        assert rep.verdict == "holds"
        assert Fraction(rep.details["closure_count"], 1 << G.m) == exact_tail(G, "1/2", d)
