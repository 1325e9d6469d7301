"""The parity-kernel polynomial Q_{n,k}(t).

B' is the set of 0/1 matrices M below I(n,k) whose every row and every column
has an even number of ones, i.e. the GF(2) nullspace of a parity constraint
system over the C(n,k) C(k,2) incidence slots.  Q_{n,k}(t) = sum_M t^|Empty(M)|
where Empty(M) is the set of all-zero columns, and

    P(G(n,1/2) is k-Ramsey) = (-1)^C(n,k) 2^((1 - C(k,2)) C(n,k)) Q_{n,k}(1 - 2^(C(k,2)-1)).

Slot ``col * C(k,2) + t`` is the t-th edge of the col-th k-subset, the same
layout as :class:`ramsey_formulas.pnk.AssignmentMatrix`.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import numpy as np

from . import budget as _budget
from ._kernels import walk_kernel_hist
from .combinatorics import _check_nk, build_incidence, count_ramsey_graphs, num_edges, popcount
from .errors import BudgetExceeded, ConsistencyError
from .exact import IntPolynomial
from .parallel import Checkpoint, Mapper, default_shard_bits, run_shards

NAIVE_MAX_VARS = 24


@dataclass(frozen=True)
class ParityConstraintSystem:
    n: int
    k: int
    n_vars: int
    edge_rows: tuple[int, ...]  # one bitset over variables per edge
    col_rows: tuple[int, ...]  # one bitset over variables per k-subset
    var_col: tuple[int, ...]
    var_edge: tuple[int, ...]

    @property
    def rows(self) -> tuple[int, ...]:
        return self.edge_rows + self.col_rows

    def satisfied_by(self, x: int) -> bool:
        return all(popcount(x & r) % 2 == 0 for r in self.rows)


def build_parity_system(n: int, k: int) -> ParityConstraintSystem:
    _check_nk(n, k)
    inc = build_incidence(n, k)
    c = comb(k, 2)
    edge_rows = [0] * num_edges(n)
    col_rows = []
    var_col, var_edge = [], []
    for col, es in enumerate(inc.col_edges):
        col_rows.append(((1 << c) - 1) << (col * c))
        for t, e in enumerate(es):
            edge_rows[e] |= 1 << (col * c + t)
            var_col.append(col)
            var_edge.append(e)
    return ParityConstraintSystem(n, k, len(var_col), tuple(edge_rows), tuple(col_rows),
                                  tuple(var_col), tuple(var_edge))


@dataclass(frozen=True)
class ParityKernel:
    """Nullspace basis, sorted by support size then value (this order is the walk order)."""

    system: ParityConstraintSystem
    basis: tuple[int, ...]
    rank: int

    @property
    def dim(self) -> int:
        return len(self.basis)

    def element(self, index: int) -> int:
        """XOR of the basis vectors selected by the bits of ``index``."""
        x = 0
        b = 0
        while index:
            if index & 1:
                x ^= self.basis[b]
            index >>= 1
            b += 1
        return x


def kernel_basis(system: ParityConstraintSystem) -> ParityKernel:
    """Reduced row echelon form over GF(2); one basis vector per free variable."""
    pivots: dict[int, int] = {}  # pivot variable -> fully reduced row
    for row in system.rows:
        for p, r in pivots.items():
            if row >> p & 1:
                row ^= r
        if not row:
            continue
        p = row.bit_length() - 1
        for q in list(pivots):
            if pivots[q] >> p & 1:
                pivots[q] ^= row
        pivots[p] = row
    basis = []
    for v in range(system.n_vars):
        if v in pivots:
            continue
        x = 1 << v
        for p, r in pivots.items():
            if r >> v & 1:
                x |= 1 << p
        basis.append(x)
    basis.sort(key=lambda x: (popcount(x), x))
    return ParityKernel(system, tuple(basis), len(pivots))


def empty_count(x: int, system: ParityConstraintSystem) -> int:
    """|Empty(M)| recomputed from scratch."""
    return sum(1 for r in system.col_rows if not x & r)


def _walk_arrays(kernel: ParityKernel):
    support = [[v for v in range(kernel.system.n_vars) if x >> v & 1] for x in kernel.basis]
    width = max((len(s) for s in support), default=1)
    basis_vars = np.zeros((max(1, len(support)), width), dtype=np.int64)
    basis_len = np.zeros(max(1, len(support)), dtype=np.int64)
    for b, s in enumerate(support):
        basis_vars[b, : len(s)] = s
        basis_len[b] = len(s)
    return basis_vars, basis_len, np.array(kernel.system.var_col, dtype=np.int64)


def _state_array(x: int, n_vars: int) -> np.ndarray:
    return np.array([x >> v & 1 for v in range(n_vars)], dtype=np.uint8)


def walk_trace(kernel: ParityKernel, top: int = 0, low_bits: int | None = None) -> np.ndarray:
    """Empty counts along the Gray walk of one shard (``top`` holds the fixed high index bits)."""
    low_bits = kernel.dim if low_bits is None else low_bits
    basis_vars, basis_len, var_col = _walk_arrays(kernel)
    hist = np.zeros(len(kernel.system.col_rows) + 1, dtype=np.int64)
    trace = np.zeros(1 << low_bits, dtype=np.int64)
    state = _state_array(kernel.element(top), kernel.system.n_vars)
    walk_kernel_hist(basis_vars, basis_len, var_col, len(kernel.system.col_rows), state, low_bits, hist, trace)
    return trace


def gray_index(top: int, i: int) -> int:
    """Kernel index visited at step ``i`` of the shard starting at ``top``."""
    return top | (i ^ (i >> 1))


@dataclass
class QnkReport:
    n: int
    k: int
    polynomial: IntPolynomial
    tau: int
    value_at_tau: int
    probability: Fraction
    dim: int
    rank: int
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)


def tau(k: int) -> int:
    return 1 - 2 ** (comb(k, 2) - 1)


def _report(n: int, k: int, Q: IntPolynomial, dim: int, rank: int, elapsed: float, extra: dict) -> QnkReport:
    c = comb(k, 2)
    cols = comb(n, k)
    t = tau(k)
    val = Q(t)
    prob = Fraction(val * (-1) ** cols, 2 ** ((c - 1) * cols))
    return QnkReport(n, k, Q, t, val, prob, dim, rank, elapsed, extra)


def compute_Q(n: int, k: int, budget: int | None = None, mapper: Mapper | None = None,
              checkpoint: str | None = None, shard_bits: int | None = None) -> QnkReport:
    """Q_{n,k} by a Gray walk over the parity kernel, sharded on the top basis coordinates."""
    t0 = time.perf_counter()
    system = build_parity_system(n, k)
    kernel = kernel_basis(system)
    d = kernel.dim
    _budget.require(f"compute_Q({n},{k})", 1 << d, _budget.graph_budget(budget))
    bits = default_shard_bits(d, max_shard_bits=22) if shard_bits is None else min(shard_bits, d)
    low = d - bits
    basis_vars, basis_len, var_col = _walk_arrays(kernel)
    cols = len(system.col_rows)
    no_trace = np.zeros(0, dtype=np.int64)

    def task(shard: int) -> list[int]:
        hist = np.zeros(cols + 1, dtype=np.int64)
        state = _state_array(kernel.element(shard << low), system.n_vars)
        walk_kernel_hist(basis_vars, basis_len, var_col, cols, state, low, hist, no_trace)
        return hist.tolist()

    ckpt = None
    if checkpoint is not None:
        key = {"formula": "qnk", "n": n, "k": k, "dim": d}
        ckpt = Checkpoint(checkpoint, key, d, bits, lambda h: [str(x) for x in h], lambda h: [int(x) for x in h])
    partials = run_shards(task, range(1 << bits), mapper, ckpt)
    coeffs = [sum(col) for col in zip(*partials)]
    Q = IntPolynomial(coeffs)
    return _report(n, k, Q, d, kernel.rank, time.perf_counter() - t0, {"shard_bits": bits})


def compute_Q_naive(n: int, k: int, budget: int | None = None) -> IntPolynomial:
    """Q_{n,k} by filtering every M below I(n,k) for the parity conditions."""
    system = build_parity_system(n, k)
    V = system.n_vars
    terms = 1 << V
    _budget.require(f"compute_Q_naive({n},{k})", terms, min(1 << NAIVE_MAX_VARS, _budget.term_budget(budget)))
    x = np.arange(terms, dtype=np.uint64)
    ok = np.ones(terms, dtype=bool)
    for r in system.rows:
        ok &= np.bitwise_count(x & np.uint64(r)) % 2 == 0
    members = x[ok]
    empty = np.zeros(members.shape, dtype=np.int64)
    for r in system.col_rows:
        empty += (members & np.uint64(r)) == 0
    return IntPolynomial(np.bincount(empty, minlength=len(system.col_rows) + 1).tolist())


def ramsey_probability_via_Q(n: int, k: int, budget: int | None = None, mapper: Mapper | None = None,
                             oracle: bool = True, cross_check_P: bool = True) -> QnkReport:
    """Probability from Q, checked against direct counting and (k = 2, 3 mod 4) against P."""
    report = compute_Q(n, k, budget, mapper)
    if oracle:
        try:
            count = count_ramsey_graphs(n, k, mapper=mapper)
        except BudgetExceeded:
            count = None
        report.extra["oracle_count"] = count
        if count is not None and Fraction(count, 1 << num_edges(n)) != report.probability:
            raise ConsistencyError(f"Q route gives {report.probability}, direct count gives {count}")
    if cross_check_P and k % 4 in (2, 3):
        from .pnk import ramsey_probability_via_P

        try:
            via_P = ramsey_probability_via_P(n, k, budget=budget, mapper=mapper, oracle=False).probability
        except BudgetExceeded:
            via_P = None
        report.extra["via_P"] = via_P
        if via_P is not None and via_P != report.probability:
            raise ConsistencyError(f"Q route gives {report.probability}, P route gives {via_P}")
    return report
