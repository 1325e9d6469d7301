from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations, product
from math import comb

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ramsey_formulas.combinatorics import Graph, build_incidence, count_ramsey_graphs, ksubsets, num_edges
from ramsey_formulas.errors import BudgetExceeded, NotInDomain, SamplerExhausted, WrongResidueClass
from ramsey_formulas.exact import IntPolynomial
from ramsey_formulas.pnk import (AssignmentMatrix, compute_P_fast, compute_P_naive, exact_edge_sums,
                                 full_incidence, involution_check, lower_set_sums, lucas_odd_binomial,
                                 moebius_transform, phi_abG, phi_direct, phi_formula, phi_table,
                                 ramsey_probability_via_P, sample_E_circ, sigma_involution,
                                 top_coefficient_split, turan_bound, turan_vanishing_check, zeta_transform)


def brute_assignments(n, k):
    """Yield (edge set as frozenset of pairs, sign, per-edge row counts) for every assignment g."""
    per_S = []
    for S in ksubsets(n, k):
        pairs = list(combinations(S, 2))
        choices = []
        for r in range(1, len(pairs)):
            choices.extend(combinations(pairs, r))
        per_S.append(choices)
    for g in product(*per_S):
        rows = {}
        size = 0
        for chosen in g:
            size += len(chosen)
            for p in chosen:
                rows[p] = rows.get(p, 0) + 1
        yield frozenset(rows), (-1) ** size, rows


def brute_P(n, k) -> IntPolynomial:
    out = {}
    for edges, sign, _ in brute_assignments(n, k):
        out[len(edges)] = out.get(len(edges), 0) + sign
    return IntPolynomial(out)


def edge_bits(n, pairs) -> int:
    return sum(1 << (j * (j - 1) // 2 + i) for i, j in pairs)


@pytest.mark.parametrize("n,k", [(3, 3), (4, 3), (4, 4), (3, 2), (4, 2)])
def test_routes_match_brute_force(n, k):
    ref = brute_P(n, k)
    assert compute_P_naive(n, k) == ref
    assert compute_P_fast(n, k) == ref


def test_fast_equals_naive_53():
    assert compute_P_fast(5, 3) == compute_P_naive(5, 3)


def test_known_polynomials():
    assert compute_P_fast(3, 3) == IntPolynomial({1: -3, 2: 3})
    assert compute_P_fast(4, 3) == IntPolynomial({2: 3, 4: -15, 5: 18, 6: -6})
    assert compute_P_fast(4, 4) == IntPolynomial({1: -6, 2: 15, 3: -20, 4: 15, 5: -6})


def test_naive_tail_split_does_not_matter():
    ref = compute_P_naive(4, 3)
    for limit in (1, 6, 36, 1 << 20):
        assert compute_P_naive(4, 3, tail_limit=limit) == ref


def test_edge_sums_against_brute_force():
    n, k = 4, 3
    ref = np.zeros(1 << num_edges(n), dtype=np.int64)
    lower = np.zeros_like(ref)
    for edges, sign, _ in brute_assignments(n, k):
        ref[edge_bits(n, edges)] += sign
    a = exact_edge_sums(n, k)
    assert (a == ref).all()
    for W in range(1 << num_edges(n)):
        lower[W] = sum(ref[V] for V in range(W + 1) if V & W == V)
    assert (lower_set_sums(n, k) == lower).all()
    P = compute_P_fast(n, k)
    assert int(a.sum()) == P(1) == sum(s for _, s, _ in brute_assignments(n, k))


def test_lower_sums_unit_for_residue_classes():
    # k = 2, 3 (mod 4): G(W) in {0, +1, -1}
    G = lower_set_sums(6, 3)
    assert set(np.unique(G).tolist()) <= {-1, 0, 1}


@given(st.lists(st.integers(-1000, 1000), min_size=16, max_size=16))
def test_moebius_inverts_zeta(values):
    a = np.array(values, dtype=np.int64)
    assert (moebius_transform(zeta_transform(a.copy())) == a).all()
    b = np.array(values, dtype=object)
    assert (zeta_transform(moebius_transform(b.copy())) == b).all()


def test_zero_polynomial_dichotomy():
    for n in (3, 4, 5):
        assert not compute_P_fast(n, 3).is_zero()
    for n in (6, 7):
        assert compute_P_fast(n, 3).is_zero()


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7])
def test_structure_of_P(n):
    P = compute_P_fast(n, 3)
    assert P(0) == 0
    assert P.is_zero() or P.degree() <= num_edges(n)
    assert turan_vanishing_check(P, n, 3)


def test_turan_examples():
    P53 = compute_P_fast(5, 3)
    assert turan_bound(5, 3) == Fraction(15, 4)
    assert all(P53.coeff(m) == 0 for m in range(4))
    P43 = compute_P_fast(4, 3)
    assert turan_bound(4, 3) == 2
    assert P43.coeff(0) == P43.coeff(1) == 0 and P43.coeff(2) != 0
    assert turan_vanishing_check(IntPolynomial(), 5, 3)
    assert not turan_vanishing_check(IntPolynomial({1: 1}), 5, 3)
    assert not turan_vanishing_check(IntPolynomial({11: 1}), 5, 3)


def test_probability_via_P():
    assert ramsey_probability_via_P(5, 3).probability == Fraction(3, 256)
    assert ramsey_probability_via_P(5, 3, route="naive").probability == Fraction(3, 256)
    r = ramsey_probability_via_P(6, 3)
    assert r.probability == 0 and r.is_zero_poly and r.oracle_count == 0
    r = ramsey_probability_via_P(4, 3)
    assert r.probability == Fraction(count_ramsey_graphs(4, 3), 2**6)
    assert r.probability == (-1) ** comb(4, 3) * r.value_at_half
    with pytest.raises(WrongResidueClass):
        ramsey_probability_via_P(5, 4)
    with pytest.raises(WrongResidueClass):
        ramsey_probability_via_P(5, 5)


def test_budgets():
    with pytest.raises(BudgetExceeded):
        compute_P_naive(6, 3)
    with pytest.raises(BudgetExceeded):
        compute_P_fast(8, 3)
    with pytest.raises(BudgetExceeded):
        compute_P_fast(5, 3, budget=100)


def test_mapper_independence():
    from concurrent.futures import ThreadPoolExecutor

    with ThreadPoolExecutor(4) as pool:
        assert compute_P_fast(6, 4, mapper=pool.map) == compute_P_fast(6, 4)


# --- involution --------------------------------------------------------------


def test_assignment_matrix_views():
    n, k = 4, 3
    I = full_incidence(n, k)
    assert I.column_counts() == [3] * 4 and I.row_counts() == [2] * 6
    assert not I.in_A_prime()
    M = AssignmentMatrix(n, k, 0b011_011_011_011)
    assert M.in_A_prime() and M.column_counts() == [2] * 4
    assert sum(M.row_counts()) == 8
    assert M.sign() == 1


def test_top_coefficient_split_against_brute_force():
    n, k = 4, 3
    R = comb(n - 2, k - 2)
    everything = e_circ = 0
    for edges, sign, rows in brute_assignments(n, k):
        if len(edges) == num_edges(n):
            everything += sign
            e_circ += sign * all(1 <= r <= R - 1 for r in rows.values())
    split = top_coefficient_split(n, k)
    assert split["rows_nonempty"] == everything == compute_P_fast(n, k).coeff(num_edges(n))
    assert split["e_circ"] == e_circ
    assert split["restricted"] == everything - e_circ


def test_top_coefficient_split_73():
    split = top_coefficient_split(7, 3)
    # P_{7,3} = 0, and sigma cancels E-circ, so the smaller restricted sum carries the whole coefficient
    assert split["rows_nonempty"] == compute_P_fast(7, 3).coeff(21) == 0
    assert split["e_circ"] == 0 and split["restricted"] == 0
    assert top_coefficient_split(5, 3)["rows_nonempty"] == compute_P_fast(5, 3).coeff(10)


def test_sampler_reproducible_and_valid():
    a = sample_E_circ(5, 3, 50, seed=3)
    b = sample_E_circ(5, 3, 50, seed=3)
    assert a == b and len(a) == 50
    assert all(M.in_E_circ() for M in a)
    assert sample_E_circ(5, 3, 50, seed=4) != a


def test_sampler_exhaustion():
    with pytest.raises(SamplerExhausted):
        sample_E_circ(5, 3, 10, seed=0, retry_bound=3)
    with pytest.raises(SamplerExhausted):
        sample_E_circ(4, 2, 1)


def test_sigma_properties_73():
    samples = sample_E_circ(7, 3, 1000, seed=11)
    for M in samples:
        S = sigma_involution(M, 7, 3)
        assert S.in_E_circ()
        assert sigma_involution(S) == M
        assert S.sign() == -M.sign()
        assert S.edges() == M.edges() == (1 << 21) - 1


def test_sigma_not_sign_reversing_53():
    for M in sample_E_circ(5, 3, 300, seed=5):
        S = sigma_involution(M)
        assert S.sign() == M.sign()
        assert sigma_involution(S) == M


def test_involution_report():
    r = involution_check(7, 3, 200, seed=1)
    assert r["hypotheses_hold"] and r["sign_reversing"] and r["involutive"] and r["domain_preserved"]
    r = involution_check(5, 3, 200, seed=1)
    assert not r["hypotheses_hold"] and not r["sign_reversing"] and r["sign_preserving_count"] == 200


def test_sigma_domain():
    with pytest.raises(NotInDomain):
        sigma_involution(AssignmentMatrix(4, 3, 0))
    with pytest.raises(NotInDomain):
        sigma_involution(full_incidence(4, 3))


@given(st.integers(0, 200), st.integers(0, 200))
def test_lucas(n, k):
    if k > n:
        n, k = k, n
    assert lucas_odd_binomial(n, k) == (comb(n, k) % 2 == 1)


def test_lucas_examples():
    assert lucas_odd_binomial(7, 3) and not lucas_odd_binomial(5, 3) and lucas_odd_binomial(9, 0)


# --- Phi census --------------------------------------------------------------


def test_phi_examples():
    assert phi_direct(Graph.complete(5), 5, 3) == phi_formula(Graph.complete(5), 5, 3) == 10
    assert phi_direct(Graph.cycle(5), 5, 3) == phi_formula(Graph.cycle(5), 5, 3) == 0
    with pytest.raises(WrongResidueClass):
        phi_formula(Graph(6), 6, 4)


def test_phi_formula_random_graphs():
    rng = random.Random(0)
    for n in (5, 6, 7):
        for _ in range(100):
            G = Graph(n, rng.getrandbits(num_edges(n)))
            assert phi_formula(G, n, 3) == phi_direct(G, n, 3)
    G = Graph(7, rng.getrandbits(21))
    assert phi_formula(G, 7, 6) == phi_direct(G, 7, 6)


def test_phi_direct_against_brute():
    rng = random.Random(9)
    for _ in range(30):
        G = Graph(6, rng.getrandbits(15))
        ref = 0
        for S in combinations(range(6), 3):
            inside = [G.has_edge(a, b) for a, b in combinations(S, 2)]
            ref += all(inside) or not any(inside)
        assert phi_direct(G, 6, 3) == ref


def test_phi_ab():
    rng = random.Random(2)
    for _ in range(20):
        G = Graph(6, rng.getrandbits(15))
        m = G.edge_count()
        assert phi_abG(0, 0, G) == 1
        for a in range(1, 4):
            assert phi_abG(a, 1, G) == 0
            assert sum(phi_abG(a, b, G) for b in range(7)) == comb(m, a)
        table = phi_table(G, 3)
        assert all(phi_abG(a, b, G) == v for (a, b), v in table.items())
    tri = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    assert phi_abG(2, 3, tri) == 3 and phi_abG(3, 3, tri) == 1
    assert phi_abG(2, 4, Graph.from_edges(4, [(0, 1), (2, 3)])) == 1
