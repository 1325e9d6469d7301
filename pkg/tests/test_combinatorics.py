from __future__ import annotations

import random
from itertools import combinations
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramsey_formulas.combinatorics import (Graph, SubsetFamily, build_incidence, complement,
                                           count_ramsey_graphs, divisibility_check, edge_endpoints,
                                           edge_index, incidence_number, is_k_ramsey, ksubset_rank,
                                           ksubset_unrank, ksubsets, multiplicity, num_edges)
from ramsey_formulas.errors import BudgetExceeded, ParameterError


def brute_is_ramsey(n, edges: set, k) -> bool:
    for S in combinations(range(n), k):
        inside = [frozenset(p) in edges for p in combinations(S, 2)]
        if all(inside) or not any(inside):
            return False
    return True


def brute_count(n, k) -> int:
    pairs = [frozenset(p) for p in combinations(range(n), 2)]
    total = 0
    for x in range(1 << len(pairs)):
        total += brute_is_ramsey(n, {p for i, p in enumerate(pairs) if x >> i & 1}, k)
    return total


def test_edge_index_examples():
    n = 7
    assert edge_index(0, 1, n) == 0
    assert edge_index(1, 2, n) == 2
    assert edge_index(n - 2, n - 1, n) == num_edges(n) - 1


@pytest.mark.parametrize("n", [2, 5, 9])
def test_edge_index_bijective(n):
    slots = sorted(edge_index(i, j, n) for i, j in combinations(range(n), 2))
    assert slots == list(range(num_edges(n)))
    for i, j in combinations(range(n), 2):
        assert edge_endpoints(edge_index(i, j, n)) == (i, j)


@pytest.mark.parametrize("i,j,n", [(1, 1, 4), (2, 1, 4), (0, 4, 4), (-1, 2, 4)])
def test_edge_index_rejects(i, j, n):
    with pytest.raises(ParameterError):
        edge_index(i, j, n)


def test_ksubset_rank_examples():
    n, k = 7, 3
    assert ksubset_rank((0, 1, 2)) == 0
    assert ksubset_rank(tuple(range(n - k, n))) == comb(n, k) - 1
    for S in combinations(range(n), k):
        assert ksubset_unrank(ksubset_rank(S), n, k) == S


def test_colex_order_matches_rank():
    subs = ksubsets(6, 3)
    assert [ksubset_rank(s) for s in subs] == list(range(comb(6, 3)))
    # colex: compare largest differing elements
    for a, b in zip(subs, subs[1:]):
        assert a[::-1] < b[::-1]


@pytest.mark.parametrize("bad", [(1, 0), (0, 0, 1), (-1, 2)])
def test_ksubset_rank_rejects(bad):
    with pytest.raises(ParameterError):
        ksubset_rank(bad)


def test_ksubset_unrank_rejects():
    with pytest.raises(ParameterError):
        ksubset_unrank(comb(5, 2), 5, 2)


@given(st.integers(2, 12).flatmap(lambda n: st.tuples(st.just(n), st.integers(1, n))))
def test_rank_unrank_roundtrip(nk):
    n, k = nk
    for r in range(0, comb(n, k), max(1, comb(n, k) // 20)):
        assert ksubset_rank(ksubset_unrank(r, n, k)) == r


@pytest.mark.parametrize("n,k", [(4, 3), (5, 2), (7, 3), (6, 4)])
def test_incidence_shape_and_sums(n, k):
    inc = build_incidence(n, k)
    assert inc.shape == (num_edges(n), comb(n, k))
    assert set(inc.row_sums()) == {comb(n - 2, k - 2)}
    assert set(inc.col_sums()) == {comb(k, 2)}
    for r, S in enumerate(ksubsets(n, k)):
        for e in range(num_edges(n)):
            i, j = edge_endpoints(e)
            assert (inc.col_masks[r] >> e & 1) == (i in S and j in S)
            assert (inc.row_masks[e] >> r & 1) == (i in S and j in S)


def test_incidence_k2_is_identity_like():
    inc = build_incidence(5, 2)
    assert all(bin(c).count("1") == 1 for c in inc.col_masks)


def test_multiplicity_examples():
    n, k = 4, 3
    assert multiplicity(0, SubsetFamily(n, k, 0)) == 0
    full = SubsetFamily.full(n, k)
    assert all(multiplicity(e, full) == comb(n - 2, k - 2) for e in range(num_edges(n)))
    U = SubsetFamily.from_subsets(n, k, [(0, 1, 2)])
    assert multiplicity(edge_index(0, 1, n), U) == 1


def test_multiplicity_sum_identity():
    rng = random.Random(1)
    for n in (3, 5, 7):
        for _ in range(50):
            U = SubsetFamily(n, 3, rng.getrandbits(comb(n, 3)))
            assert sum(multiplicity(e, U) for e in range(num_edges(n))) == len(U) * 3


def test_incidence_number_examples():
    n, k = 5, 3
    assert incidence_number(Graph.complete(n), SubsetFamily.full(n, k)) == comb(n, k) * comb(k, 2)
    assert incidence_number(Graph(n), SubsetFamily.full(n, k)) == 0
    G = Graph.from_edges(4, [(0, 1)])
    H = SubsetFamily.from_subsets(4, 3, [(0, 1, 2)])
    assert incidence_number(G, H) == 1
    with pytest.raises(ParameterError):
        incidence_number(Graph(4), SubsetFamily(5, 3))


def test_incidence_number_against_pair_loop():
    rng = random.Random(7)
    n, k = 6, 3
    subs = ksubsets(n, k)
    for _ in range(1000):
        G = Graph(n, rng.getrandbits(num_edges(n)))
        H = SubsetFamily(n, k, rng.getrandbits(comb(n, k)))
        edges = G.edge_list()
        hyper = [subs[r] for r in range(len(subs)) if H.members >> r & 1]
        naive = sum(1 for u in edges for v in hyper if u[0] in v and u[1] in v)
        assert incidence_number(G, H) == naive


def test_is_k_ramsey_examples():
    assert is_k_ramsey(Graph.cycle(5), 3)
    assert not is_k_ramsey(Graph(5), 3)
    assert not is_k_ramsey(Graph.complete(5), 3)


@given(st.integers(0, 2**15 - 1))
def test_complement_symmetry(bits):
    G = Graph(6, bits)
    assert complement(complement(G)) == G
    assert is_k_ramsey(G, 3) == is_k_ramsey(complement(G), 3)
    assert is_k_ramsey(G, 4) == is_k_ramsey(G.complement(), 4)


@given(st.integers(2, 7).flatmap(lambda n: st.tuples(st.just(n), st.integers(0, 2 ** num_edges(n) - 1))))
def test_is_k_ramsey_against_brute(nx):
    n, bits = nx
    G = Graph(n, bits)
    edge_set = {frozenset(p) for p in G.edge_list()}
    for k in range(2, n + 1):
        assert is_k_ramsey(G, k) == brute_is_ramsey(n, edge_set, k)


def test_graph_validation():
    with pytest.raises(ParameterError):
        Graph(4, 1 << 6)
    with pytest.raises(ParameterError):
        Graph(33)
    assert Graph.from_edges(3, [(2, 0)]).has_edge(0, 2)
    assert Graph(3, 0b101).signs() == [1, -1, 1]


@pytest.mark.parametrize("n,k", [(2, 2), (3, 2), (3, 3), (4, 3), (5, 3), (6, 3), (5, 4)])
def test_count_matches_brute_force(n, k):
    assert count_ramsey_graphs(n, k) == brute_count(n, k)


def test_count_examples():
    assert count_ramsey_graphs(5, 3) == 12
    assert count_ramsey_graphs(6, 3) == 0
    assert count_ramsey_graphs(7, 3) == 0
    assert count_ramsey_graphs(2, 2) == 0
    assert count_ramsey_graphs(3, 2) == 0
    assert all(count_ramsey_graphs(n, 3) > 0 for n in (3, 4, 5))


def test_every_graph_on_six_vertices_has_monochromatic_triangle():
    assert not any(is_k_ramsey(Graph(6, x), 3) for x in range(1 << 15))


def test_count_budget():
    with pytest.raises(BudgetExceeded):
        count_ramsey_graphs(6, 3, budget=1000)
    with pytest.raises(BudgetExceeded):
        count_ramsey_graphs(9, 3)


def test_count_thread_independent():
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(4) as pool:
        assert count_ramsey_graphs(6, 3, mapper=pool.map) == count_ramsey_graphs(6, 3)
        assert count_ramsey_graphs(5, 3, mapper=pool.map) == 12


def test_divisibility_examples():
    for n, k in ((43, 5), (44, 5), (48, 5), (8, 3)):
        assert divisibility_check(n, k)
    for n, k in ((6, 3), (45, 5)):
        assert not divisibility_check(n, k)
    with pytest.raises(ParameterError):
        divisibility_check(3, 4)


def test_parameter_range():
    with pytest.raises(ParameterError):
        build_incidence(3, 4)
    with pytest.raises(ParameterError):
        build_incidence(33, 3)
