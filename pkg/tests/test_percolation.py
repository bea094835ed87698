from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from percolor.graph import Graph, complete, cycle, petersen
from percolor.percolation import (
    CapExceededError,
    check_product_bound,
    exact_chi_distribution,
    exact_expected_chi,
    exact_tail,
    mc_tail,
    parse_probability,
    sample,
    sample_mask,
    score_interval,
)
from percolor.solvers import chromatic_number
from oracles import brute_chi, brute_chi_distribution
from test_graph import graphs

HALF = Fraction(1, 2)


def test_sample_extremes():
    G = petersen()
    assert sample(G, 1, seed=3) == G
    assert sample(G, "0", seed=3).m == 0
    assert sample(G, "1/2", seed=3, trial=7) == sample(G, "1/2", seed=3, trial=7)


def test_sample_mean_edge_count():
    K4 = complete(4)
    counts = [sample_mask(K4, "1/2", 11, t).bit_count() for t in range(10_000)]
    mean = sum(counts) / len(counts)
    # Binomial(6, 1/2) has variance 1.5
    assert abs(mean - 3) <= 3 * (1.5 / 10_000) ** 0.5


def test_sample_streams_are_keyed_by_seed_and_trial():
    G = complete(8)
    a = [sample_mask(G, "1/2", 1, t) for t in range(50)]
    b = [sample_mask(G, "1/2", 2, t) for t in range(50)]
    assert len(set(a)) > 40 and a != b


def test_parse_probability():
    assert parse_probability("31/32") == Fraction(31, 32)
    assert parse_probability(1) == 1
    for bad in (0.5, "3/2", "1/0", "-1/2"):
        with pytest.raises((TypeError, ValueError)):
            parse_probability(bad)


# exact distribution; expected values below come from brute_chi_distribution

def test_exact_distribution_k3():
    dist = exact_chi_distribution(complete(3), "1/2")
    assert dist.support == {1: Fraction(1, 8), 2: Fraction(6, 8), 3: Fraction(1, 8)}
    assert dist.support == brute_chi_distribution(3, complete(3).edges)


def test_exact_distribution_k2():
    assert exact_chi_distribution(complete(2), "1/2").support == {1: HALF, 2: HALF}


@pytest.mark.parametrize("G,expected", [
    (complete(4), {1: Fraction(1, 64), 2: Fraction(5, 8), 3: Fraction(11, 32), 4: Fraction(1, 64)}),
    (complete(5), {1: Fraction(1, 1024), 2: Fraction(375, 1024), 3: Fraction(291, 512),
                   4: Fraction(65, 1024), 5: Fraction(1, 1024)}),
    (cycle(6), {1: Fraction(1, 64), 2: Fraction(63, 64)}),
])
def test_exact_distribution_frozen(G, expected):
    assert exact_chi_distribution(G, "1/2").support == expected


def test_exact_distribution_general_p():
    assert exact_chi_distribution(complete(3), "1/3").support == {
        1: Fraction(8, 27), 2: Fraction(2, 3), 3: Fraction(1, 27)}
    assert exact_chi_distribution(petersen(), 0).support == {1: 1}
    assert exact_chi_distribution(petersen(), 1).support == {3: 1}


def test_exact_tail_closed_forms():
    assert exact_tail(complete(3), "1/2", 2) == Fraction(7, 8)
    assert exact_tail(cycle(5), "1/2", 2) == Fraction(31, 32)
    assert exact_tail(cycle(7), "1/2", 2) == Fraction(127, 128)
    assert exact_tail(petersen(), "1/2", 3) == 1


def test_exact_expected_chi():
    assert exact_expected_chi(complete(3), "1/2") == 2
    assert exact_expected_chi(complete(2), "1/2") == Fraction(3, 2)
    assert exact_expected_chi(Graph(4), "1/3") == 1
    assert exact_expected_chi(Graph(0), "1/2") == 0


def test_exact_mode_rejects_floats_and_caps():
    with pytest.raises(TypeError):
        exact_tail(cycle(5), 0.5, 2)
    with pytest.raises(CapExceededError):
        exact_tail(complete(8), "1/2", 2)  # 28 edges
    with pytest.raises(CapExceededError):
        exact_tail(cycle(5), "1/2", 2, cap=4)


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=6), st.sampled_from(["1/2", "1/3", "3/4"]))
def test_exact_distribution_matches_enumeration(G, p):
    if G.m > 10:
        G = Graph(G.n, G.edges[:10])
    dist = exact_chi_distribution(G, p)
    assert sum(dist.support.values()) == 1
    brute = {k: v for k, v in brute_chi_distribution(G.n, G.edges, parse_probability(p)).items() if v}
    assert dist.support == brute


@settings(max_examples=40, deadline=None)
@given(graphs(max_n=7))
def test_tail_monotone_in_d_and_edges(G):
    if G.m > 12:
        G = Graph(G.n, G.edges[:12])
    k = chromatic_number(G).value
    tails = [exact_tail(G, "1/2", d) for d in range(0, k + 2)]
    assert tails == sorted(tails) and tails[-1] == 1
    missing = [e for e in combinations(range(G.n), 2) if e not in G.edge_index]
    if missing:
        H = Graph(G.n, list(G.edges) + [missing[0]])
        for d in range(1, k + 1):
            assert exact_tail(H, "1/2", d) <= exact_tail(G, "1/2", d)


def test_expectation_at_least_sqrt_chi(corpus):
    for G in corpus.values():
        if G.m <= 20:
            k = chromatic_number(G).value
            assert exact_expected_chi(G, "1/2") ** 2 >= k


# Monte Carlo

def test_mc_tail_degenerate():
    est = mc_tail(cycle(5), "0", 1, trials=100, seed=5)
    assert est.point == 1.0 and est.ci_low <= 1.0 <= est.ci_high


def test_mc_tail_deterministic_and_worker_independent():
    a = mc_tail(petersen(), "1/2", 2, trials=30_000, seed=99, confidence=0.99, workers=1)
    b = mc_tail(petersen(), "1/2", 2, trials=30_000, seed=99, confidence=0.99, workers=4)
    c = mc_tail(petersen(), "1/2", 2, trials=30_000, seed=99, confidence=0.99, workers=1)
    assert a == b == c
    assert a.ci_low <= a.point <= a.ci_high


def test_mc_tail_accepts_float_p():
    est = mc_tail(cycle(5), 0.5, 2, trials=2000, seed=1)
    assert est == mc_tail(cycle(5), "1/2", 2, trials=2000, seed=1)


def test_mc_tail_close_to_exact():
    exact = float(exact_tail(petersen(), "1/2", 2))
    est = mc_tail(petersen(), "1/2", 2, trials=20_000, seed=2024, confidence=0.999)
    assert est.ci_low <= exact <= est.ci_high


@pytest.mark.parametrize("s,n", [(0, 10), (10, 10), (3, 10), (500, 1000)])
def test_score_interval_contains_point(s, n):
    low, high = score_interval(s, n, 0.95)
    assert 0 <= low <= s / n <= high <= 1


def test_score_interval_reference_value():
    # Wilson interval for 9/10 at 95%: centre and half-width from the closed form
    z = 1.959963984540054
    phat, n = 0.9, 10
    centre = (phat + z * z / (2 * n)) / (1 + z * z / n)
    half = z / (1 + z * z / n) * (phat * (1 - phat) / n + z * z / (4 * n * n)) ** 0.5
    low, high = score_interval(9, 10, 0.95)
    assert low == pytest.approx(centre - half, abs=1e-12)
    assert high == pytest.approx(centre + half, abs=1e-12)


# product bound

def test_product_bound_k4_exhaustive():
    K4 = complete(4)
    assert check_product_bound(K4) == (True, None)
    for S in range(64):
        H = K4.edges_of(S)
        Hbar = K4.edges_of(63 ^ S)
        assert brute_chi(4, H) * brute_chi(4, Hbar) >= 4


@pytest.mark.parametrize("G", [cycle(5), complete(3), petersen()])
def test_product_bound_small_graphs(G):
    assert check_product_bound(G) == (True, None)


def test_product_bound_sampled_mode():
    ok, bad = check_product_bound(complete(8), cap=10, samples=200)
    assert ok and bad is None
