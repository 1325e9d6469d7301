"""The signed enumeration polynomial P_{n,k}(t) and the results built on it.

An assignment g picks, for every k-subset S, a graph on S that is neither
empty nor complete.  In matrix form g is a 0/1 matrix M below I(n,k) whose
columns each hold between 1 and C(k,2)-1 ones; sign(M) = (-1)^|M| and
Edges(M) is the set of nonzero rows.  P_{n,k}(t) = sum_M sign(M) t^|Edges(M)|.

Two independent routes compute P:

* :func:`compute_P_naive` visits every assignment.
* :func:`compute_P_fast` computes, for every edge set W, the signed count
  G(W) of assignments with Edges inside W.  G factors over columns:
  h(W, S) = [W misses S] - 1 - (-1)^C(k,2) [W covers S].  A subset Moebius
  transform turns G into a_W = signed count with Edges exactly W, and
  P = sum_W a_W t^|W|.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product
from math import comb

import numpy as np

from . import budget as _budget
from ._kernels import row_restricted_signed_sum
from .combinatorics import (Graph, _check_nk, build_incidence, count_ramsey_graphs, edge_endpoints,
                            num_edges, popcount)
from .errors import (BudgetExceeded, ConsistencyError, NotInDomain, ParameterError,
                     SamplerExhausted, WrongResidueClass)
from .exact import IntPolynomial
from .parallel import Mapper, default_shard_bits, run_shards, shard_range

SAMPLER_RETRY_BOUND = 10**6


def _require_residue(k: int) -> None:
    if k % 4 not in (2, 3):
        raise WrongResidueClass(f"k={k} is {k % 4} mod 4; need 2 or 3")


def _column_patterns(col_edges: tuple[int, ...]) -> list[tuple[int, int]]:
    """(edge mask, parity) for every nonempty proper subset of a column's edges."""
    c = len(col_edges)
    out = []
    for p in range(1, (1 << c) - 1):
        mask = 0
        for t in range(c):
            if p >> t & 1:
                mask |= 1 << col_edges[t]
        out.append((mask, popcount(p) & 1))
    return out


def naive_term_count(n: int, k: int) -> int:
    return ((1 << comb(k, 2)) - 2) ** comb(n, k)


def compute_P_naive(n: int, k: int, budget: int | None = None, tail_limit: int = 1 << 16) -> IntPolynomial:
    """P_{n,k} by visiting every assignment.

    The leading columns are walked as an odometer; the trailing columns are
    expanded into arrays so each odometer position handles all its completions
    in one vectorized pass.
    """
    _check_nk(n, k)
    _budget.require(f"compute_P_naive({n},{k})", naive_term_count(n, k), _budget.term_budget(budget))
    inc = build_incidence(n, k)
    E = num_edges(n)
    pats = [_column_patterns(es) for es in inc.col_edges]
    npat = len(pats[0])
    if npat == 0:
        return IntPolynomial()
    cols = len(pats)
    tail = 0
    while tail < cols and npat ** (tail + 1) <= tail_limit:
        tail += 1
    tail_masks = np.zeros(1, dtype=np.uint64)
    tail_par = np.zeros(1, dtype=np.uint8)
    for col in pats[cols - tail:]:
        pm = np.array([m for m, _ in col], dtype=np.uint64)
        pp = np.array([p for _, p in col], dtype=np.uint8)
        tail_masks = (tail_masks[:, None] | pm[None, :]).ravel()
        tail_par = (tail_par[:, None] ^ pp[None, :]).ravel()
    acc = np.zeros(E + 1, dtype=np.int64)
    for choice in product(*pats[: cols - tail]):
        head_mask = 0
        head_par = 0
        for m, p in choice:
            head_mask |= m
            head_par ^= p
        deg = np.bitwise_count(tail_masks | np.uint64(head_mask))
        negative = (tail_par ^ head_par).astype(bool)
        acc += np.bincount(deg[~negative], minlength=E + 1)
        acc -= np.bincount(deg[negative], minlength=E + 1)
    return IntPolynomial(acc.tolist())


def lower_set_sums(n: int, k: int, budget: int | None = None, mapper: Mapper | None = None) -> np.ndarray:
    """G(W) for every edge set W: signed count of assignments with Edges inside W."""
    _check_nk(n, k)
    E = num_edges(n)
    _budget.require(f"compute_P_fast({n},{k})", 1 << E, _budget.term_budget(budget))
    inc = build_incidence(n, k)
    c = comb(k, 2)
    full_val = -1 - (-1) ** c
    word = k % 4 in (2, 3)  # then G(W) is 0 or +-1 and every Moebius entry fits in 64 bits
    masks = [np.uint64(m) for m in inc.col_masks]
    bits = default_shard_bits(E, max_shard_bits=20)

    def task(shard: int) -> np.ndarray:
        lo, hi = shard_range(shard, E, bits)
        W = np.arange(lo, hi, dtype=np.uint64)
        G = np.ones(hi - lo, dtype=np.int64 if word else object)
        for m in masks:
            s = W & m
            h = np.where(s == 0, 0, np.where(s == m, full_val, -1))
            G *= h if word else h.astype(object)
        return G

    return np.concatenate(run_shards(task, range(1 << bits), mapper))


def moebius_transform(table: np.ndarray) -> np.ndarray:
    """In place: a[W] <- sum_{V subset W} (-1)^|W - V| a[V], one dimension per pass."""
    size = table.shape[0]
    step = 1
    while step < size:
        view = table.reshape(-1, 2, step)
        view[:, 1, :] -= view[:, 0, :]
        step <<= 1
    return table


def zeta_transform(table: np.ndarray) -> np.ndarray:
    """In place: a[W] <- sum_{V subset W} a[V] (inverse of :func:`moebius_transform`)."""
    size = table.shape[0]
    step = 1
    while step < size:
        view = table.reshape(-1, 2, step)
        view[:, 1, :] += view[:, 0, :]
        step <<= 1
    return table


def exact_edge_sums(n: int, k: int, budget: int | None = None, mapper: Mapper | None = None) -> np.ndarray:
    """a_W: signed count of assignments whose edge set is exactly W."""
    return moebius_transform(lower_set_sums(n, k, budget, mapper))


def compute_P_fast(n: int, k: int, budget: int | None = None, mapper: Mapper | None = None) -> IntPolynomial:
    E = num_edges(n)
    a = exact_edge_sums(n, k, budget, mapper)
    deg = np.bitwise_count(np.arange(1 << E, dtype=np.uint64))
    return IntPolynomial({d: int(a[deg == d].sum()) for d in range(E + 1)})


@dataclass
class PnkReport:
    n: int
    k: int
    polynomial: IntPolynomial
    value_at_half: Fraction
    probability: Fraction
    is_zero_poly: bool
    oracle_count: int | None = None
    route: str = "fast"


def ramsey_probability_via_P(n: int, k: int, route: str = "fast", budget: int | None = None,
                             mapper: Mapper | None = None, oracle: bool = True) -> PnkReport:
    """P(G(n,1/2) is k-Ramsey) = (-1)^C(n,k) P_{n,k}(1/2), checked against direct counting."""
    _check_nk(n, k)
    _require_residue(k)
    if route == "fast":
        P = compute_P_fast(n, k, budget, mapper)
    elif route == "naive":
        P = compute_P_naive(n, k, budget)
    else:
        raise ParameterError(f"unknown route {route!r}")
    half = P(Fraction(1, 2))
    prob = -half if comb(n, k) % 2 else half
    count = None
    if oracle:
        try:
            count = count_ramsey_graphs(n, k, mapper=mapper)
        except BudgetExceeded:
            count = None
        if count is not None and Fraction(count, 1 << num_edges(n)) != prob:
            raise ConsistencyError(f"P route gives {prob}, direct count gives {count}/2^{num_edges(n)}")
    return PnkReport(n, k, P, half, prob, P.is_zero(), count, route)


def turan_bound(n: int, k: int) -> Fraction:
    """Coefficients of t^m vanish for m strictly below n^2/(2(k-1)) - n/2."""
    return Fraction(n * n, 2 * (k - 1)) - Fraction(n, 2)


def turan_vanishing_check(P: IntPolynomial, n: int, k: int) -> bool:
    bound = turan_bound(n, k)
    top = num_edges(n)
    return all(bound <= d <= top for d in P.coeffs)


def lucas_odd_binomial(n: int, k: int) -> bool:
    """C(n,k) is odd iff every binary digit of k is at most the matching digit of n."""
    if not (0 <= k <= n):
        raise ParameterError(f"need 0 <= k <= n, got n={n}, k={k}")
    return k & n == k


# --- assignment matrices and the involution M -> I(n,k) - M ------------------


@dataclass(frozen=True)
class AssignmentMatrix:
    """M below I(n,k), stored as a bitset over (column, edge-in-column) slots.

    Slot ``col * C(k,2) + t`` is the t-th edge (in slot order) of the col-th
    k-subset (colex).  The same layout indexes the parity variables of Q_{n,k}.
    """

    n: int
    k: int
    bits: int

    @property
    def width(self) -> int:
        return comb(self.n, self.k) * comb(self.k, 2)

    def column_counts(self) -> list[int]:
        c = comb(self.k, 2)
        full = (1 << c) - 1
        return [popcount(self.bits >> (col * c) & full) for col in range(comb(self.n, self.k))]

    def row_counts(self) -> list[int]:
        inc = build_incidence(self.n, self.k)
        rows = [0] * num_edges(self.n)
        c = len(inc.col_edges[0])
        for col, es in enumerate(inc.col_edges):
            for t, e in enumerate(es):
                if self.bits >> (col * c + t) & 1:
                    rows[e] += 1
        return rows

    def edges(self) -> int:
        return sum(1 << e for e, r in enumerate(self.row_counts()) if r)

    def sign(self) -> int:
        return -1 if popcount(self.bits) % 2 else 1

    def in_A_prime(self) -> bool:
        c = comb(self.k, 2)
        return self.bits >> self.width == 0 and all(1 <= x <= c - 1 for x in self.column_counts())

    def in_E_circ(self) -> bool:
        R = comb(self.n - 2, self.k - 2)
        return self.in_A_prime() and all(1 <= r <= R - 1 for r in self.row_counts())


def full_incidence(n: int, k: int) -> AssignmentMatrix:
    return AssignmentMatrix(n, k, (1 << (comb(n, k) * comb(k, 2))) - 1)


def sigma_involution(M: AssignmentMatrix, n: int | None = None, k: int | None = None) -> AssignmentMatrix:
    """sigma(M) = I(n,k) - M, defined on E-circ."""
    if (n is not None and n != M.n) or (k is not None and k != M.k):
        raise ParameterError("matrix parameters do not match (n, k)")
    if not M.in_E_circ():
        raise NotInDomain("matrix is not in E-circ")
    return AssignmentMatrix(M.n, M.k, M.bits ^ full_incidence(M.n, M.k).bits)


def sample_E_circ(n: int, k: int, count: int, seed: int = 0,
                  retry_bound: int = SAMPLER_RETRY_BOUND) -> list[AssignmentMatrix]:
    """Seeded rejection sampler: uniform admissible columns, then reject on row conditions."""
    _check_nk(n, k)
    c = comb(k, 2)
    cols = comb(n, k)
    if c < 2:
        raise SamplerExhausted(f"E-circ is empty for k={k}")
    rng = random.Random(seed)
    full = (1 << c) - 1
    out: list[AssignmentMatrix] = []
    tries = 0
    while len(out) < count:
        if tries >= retry_bound:
            raise SamplerExhausted(f"only {len(out)} of {count} samples after {tries} attempts")
        tries += 1
        bits = 0
        for col in range(cols):
            pattern = 0
            while pattern == 0 or pattern == full:
                pattern = rng.getrandbits(c)
            bits |= pattern << (col * c)
        M = AssignmentMatrix(n, k, bits)
        if M.in_E_circ():
            out.append(M)
    return out


def involution_check(n: int, k: int, samples: int = 1000, seed: int = 0,
                     retry_bound: int = SAMPLER_RETRY_BOUND) -> dict:
    """Check domain preservation, involutivity and sign behaviour of sigma on sampled E-circ."""
    domain = involutive = reversing = preserving = 0
    for M in sample_E_circ(n, k, samples, seed, retry_bound):
        S = sigma_involution(M)
        domain += S.in_E_circ()
        involutive += sigma_involution(S) == M
        reversing += S.sign() == -M.sign()
        preserving += S.sign() == M.sign()
    return {
        "n": n, "k": k, "samples": samples, "seed": seed, "retry_bound": retry_bound,
        "hypotheses_hold": k % 4 in (2, 3) and lucas_odd_binomial(n, k),
        "domain_preserved": domain == samples,
        "involutive": involutive == samples,
        "sign_reversing": reversing == samples,
        "sign_reversing_count": reversing,
        "sign_preserving_count": preserving,
    }


def _column_label_table(c: int) -> np.ndarray:
    """Signed pattern count per column labelling (0 free, 1 forced empty, 2 forced full)."""
    table = np.zeros(3**c, dtype=np.int64)
    for code in range(3**c):
        labels = [code // 3**t % 3 for t in range(c)]
        must = sum(1 << t for t in range(c) if labels[t] == 2)
        never = sum(1 << t for t in range(c) if labels[t] == 1)
        for p in range(1, (1 << c) - 1):
            if p & must == must and not p & never:
                table[code] += -1 if popcount(p) % 2 else 1
    return table


def top_coefficient_split(n: int, k: int, budget: int | None = None) -> dict:
    """[t^C(n,2)] P split over E-circ and its complement, by inclusion-exclusion on rows.

    Returns the signed sums over all of E_{C(n,2)} (every row nonempty), over
    E-circ (every row count in [1, C(n-2,k-2)-1]) and over their difference.
    """
    _check_nk(n, k)
    E = num_edges(n)
    _budget.require(f"top_coefficient_split({n},{k})", 3**E, _budget.resolve(budget, 3**21))
    inc = build_incidence(n, k)
    c = comb(k, 2)
    table = _column_label_table(c)
    if np.abs(table).max() > 1:
        raise ParameterError(f"column weights for k={k} exceed the 64-bit product bound")
    col_edges = inc.col_edges_array()
    col_last = col_edges.max(axis=1).astype(np.int64)
    everything = int(row_restricted_signed_sum(col_edges, col_last, table, E, False))
    e_circ = int(row_restricted_signed_sum(col_edges, col_last, table, E, True))
    return {"rows_nonempty": everything, "e_circ": e_circ, "restricted": everything - e_circ}


# --- clique/anticlique census ------------------------------------------------


def _effective_vertices(edge_slots) -> int:
    verts = set()
    for e in edge_slots:
        verts.update(edge_endpoints(e))
    return len(verts)


def phi_abG(a: int, b: int, G: Graph) -> int:
    """Subgraphs of G with exactly a edges and b effective (positive-degree) vertices."""
    edges = [e for e in range(num_edges(G.n)) if G.edges >> e & 1]
    return sum(1 for sub in combinations(edges, a) if _effective_vertices(sub) == b)


def phi_table(G: Graph, max_edges: int, budget: int | None = None) -> dict[tuple[int, int], int]:
    edges = [e for e in range(num_edges(G.n)) if G.edges >> e & 1]
    terms = sum(comb(len(edges), a) for a in range(max_edges + 1))
    _budget.require("phi_table", terms, _budget.term_budget(budget))
    out: dict[tuple[int, int], int] = {}
    for a in range(max_edges + 1):
        for sub in combinations(edges, a):
            key = (a, _effective_vertices(sub))
            out[key] = out.get(key, 0) + 1
    return out


def phi_formula(G: Graph, n: int, k: int, budget: int | None = None) -> int:
    """Phi(G) = sum_{a < C(k,2)} sum_{b <= k} (-1)^a C(n-b, k-b) phi(a, b; G)."""
    if G.n != n:
        raise ParameterError("graph size does not match n")
    _check_nk(n, k)
    _require_residue(k)
    table = phi_table(G, comb(k, 2) - 1, budget)
    return sum((-1) ** a * comb(n - b, k - b) * cnt for (a, b), cnt in table.items() if b <= k)


def phi_direct(G: Graph, n: int, k: int) -> int:
    """Number of k-subsets inducing a clique or an anticlique."""
    if G.n != n:
        raise ParameterError("graph size does not match n")
    total = 0
    for mask in build_incidence(n, k).col_masks:
        x = G.edges & mask
        total += x == 0 or x == mask
    return total
