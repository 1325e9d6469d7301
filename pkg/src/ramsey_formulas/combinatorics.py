"""Edge/k-subset indexing, the incidence structure I(n,k) and brute-force Ramsey oracles.

Bit layout (used by every module and by file output):

* edge ``{i, j}`` with ``i < j`` lives at slot ``j*(j-1)/2 + i`` (colex);
* k-subset ``{s_1 < ... < s_k}`` lives at colex rank ``sum_t C(s_t, t)``.

Graphs and subset families are plain Python ints used as bitsets.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations
from math import comb, factorial

import numpy as np

from . import budget as _budget
from .errors import ParameterError
from .parallel import Mapper, default_shard_bits, run_shards, shard_range

MAX_VERTICES = 32


def _check_nk(n: int, k: int) -> None:
    if not (2 <= k <= n):
        raise ParameterError(f"need 2 <= k <= n, got n={n}, k={k}")
    if n > MAX_VERTICES:
        raise ParameterError(f"n={n} exceeds the supported maximum {MAX_VERTICES}")


def num_edges(n: int) -> int:
    return n * (n - 1) // 2


def edge_index(i: int, j: int, n: int) -> int:
    if not (0 <= i < j < n):
        raise ParameterError(f"invalid edge ({i}, {j}) for n={n}")
    return j * (j - 1) // 2 + i


def edge_endpoints(e: int) -> tuple[int, int]:
    """Inverse of :func:`edge_index` (independent of n)."""
    if e < 0:
        raise ParameterError(f"negative edge slot {e}")
    j = 1
    while j * (j + 1) // 2 <= e:
        j += 1
    return e - j * (j - 1) // 2, j


def ksubset_rank(subset) -> int:
    s = tuple(subset)
    if any(a < 0 for a in s) or any(a >= b for a, b in zip(s, s[1:])):
        raise ParameterError(f"subset {s} is not strictly increasing and nonnegative")
    return sum(comb(x, t) for t, x in enumerate(s, start=1))


def ksubset_unrank(r: int, n: int, k: int) -> tuple[int, ...]:
    if not (0 <= k <= n) or not (0 <= r < comb(n, k)):
        raise ParameterError(f"rank {r} out of range for C({n},{k})")
    out = []
    x = n - 1
    for t in range(k, 0, -1):
        while comb(x, t) > r:
            x -= 1
        out.append(x)
        r -= comb(x, t)
        x -= 1
    return tuple(reversed(out))


def ksubsets(n: int, k: int) -> list[tuple[int, ...]]:
    """All k-subsets of ``range(n)`` in colex order."""
    subs = list(combinations(range(n), k))
    subs.sort(key=lambda s: s[::-1])
    return subs


def popcount(x: int) -> int:
    return bin(x).count("1")


@dataclass(frozen=True)
class Graph:
    n: int
    edges: int = 0

    def __post_init__(self):
        if not (1 <= self.n <= MAX_VERTICES):
            raise ParameterError(f"unsupported vertex count {self.n}")
        if self.edges < 0 or self.edges >> num_edges(self.n):
            raise ParameterError("edge bitset wider than C(n,2)")

    @classmethod
    def from_edges(cls, n: int, pairs) -> Graph:
        bits = 0
        for i, j in pairs:
            i, j = min(i, j), max(i, j)
            bits |= 1 << edge_index(i, j, n)
        return cls(n, bits)

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls(n, (1 << num_edges(n)) - 1)

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(v, (v + 1) % n) for v in range(n)])

    def complement(self) -> Graph:
        return Graph(self.n, self.edges ^ ((1 << num_edges(self.n)) - 1))

    def has_edge(self, i: int, j: int) -> bool:
        i, j = min(i, j), max(i, j)
        return bool(self.edges >> edge_index(i, j, self.n) & 1)

    def edge_count(self) -> int:
        return popcount(self.edges)

    def edge_list(self) -> list[tuple[int, int]]:
        return [edge_endpoints(e) for e in range(num_edges(self.n)) if self.edges >> e & 1]

    def signs(self) -> list[int]:
        """The +-1 view y_e = 2 x_e - 1, indexed by edge slot."""
        return [2 * (self.edges >> e & 1) - 1 for e in range(num_edges(self.n))]


@dataclass(frozen=True)
class SubsetFamily:
    n: int
    k: int
    members: int = 0

    def __post_init__(self):
        if self.members < 0 or self.members >> comb(self.n, self.k):
            raise ParameterError("member bitset wider than C(n,k)")

    @classmethod
    def from_subsets(cls, n: int, k: int, subsets) -> SubsetFamily:
        bits = 0
        for s in subsets:
            s = tuple(sorted(s))
            if len(s) != k or s[-1] >= n:
                raise ParameterError(f"{s} is not a {k}-subset of range({n})")
            bits |= 1 << ksubset_rank(s)
        return cls(n, k, bits)

    @classmethod
    def full(cls, n: int, k: int) -> SubsetFamily:
        return cls(n, k, (1 << comb(n, k)) - 1)

    def __len__(self) -> int:
        return popcount(self.members)


@dataclass(frozen=True)
class IncidenceMatrix:
    """I(n,k): rows are edges, columns are k-subsets, entry 1 iff edge inside subset."""

    n: int
    k: int
    col_masks: tuple[int, ...]  # per column: edge bitset of C(S,2)
    row_masks: tuple[int, ...]  # per edge row: column bitset
    col_edges: tuple[tuple[int, ...], ...]  # per column: sorted edge slots

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.row_masks), len(self.col_masks)

    def row_sums(self) -> list[int]:
        return [popcount(r) for r in self.row_masks]

    def col_sums(self) -> list[int]:
        return [popcount(c) for c in self.col_masks]

    def col_edges_array(self) -> np.ndarray:
        return np.array(self.col_edges, dtype=np.int64).reshape(len(self.col_edges), comb(self.k, 2))


@lru_cache(maxsize=64)
def build_incidence(n: int, k: int) -> IncidenceMatrix:
    _check_nk(n, k)
    E = num_edges(n)
    col_masks, col_edges = [], []
    rows = [0] * E
    for r, s in enumerate(ksubsets(n, k)):
        es = tuple(sorted(edge_index(a, b, n) for a, b in combinations(s, 2)))
        mask = 0
        for e in es:
            mask |= 1 << e
            rows[e] |= 1 << r
        col_masks.append(mask)
        col_edges.append(es)
    return IncidenceMatrix(n, k, tuple(col_masks), tuple(rows), tuple(col_edges))


def multiplicity(e: int, U: SubsetFamily) -> int:
    inc = build_incidence(U.n, U.k)
    if not (0 <= e < len(inc.row_masks)):
        raise ParameterError(f"edge slot {e} out of range")
    return popcount(inc.row_masks[e] & U.members)


def incidence_number(G: Graph, H: SubsetFamily) -> int:
    if G.n != H.n:
        raise ParameterError(f"graph on {G.n} vertices vs hypergraph on {H.n}")
    inc = build_incidence(H.n, H.k)
    total = 0
    members = H.members
    r = 0
    while members:
        if members & 1:
            total += popcount(G.edges & inc.col_masks[r])
        members >>= 1
        r += 1
    return total


def is_k_ramsey(G: Graph, k: int) -> bool:
    if k > G.n:
        raise ParameterError(f"k={k} exceeds n={G.n}")
    if k < 2:
        return False
    for mask in build_incidence(G.n, k).col_masks:
        x = G.edges & mask
        if x == 0 or x == mask:
            return False
    return True


def complement(G: Graph) -> Graph:
    return G.complement()


def _count_ramsey_range(masks: np.ndarray, lo: int, hi: int, chunk: int = 1 << 20) -> int:
    count = 0
    for start in range(lo, hi, chunk):
        x = np.arange(start, min(hi, start + chunk), dtype=np.uint64)
        ok = np.ones(x.shape, dtype=bool)
        for m in masks:
            y = x & m
            ok &= (y != 0) & (y != m)
        count += int(np.count_nonzero(ok))
    return count


def count_ramsey_graphs(n: int, k: int, budget: int | None = None,
                        mapper: Mapper | None = None) -> int:
    """Number of labeled k-Ramsey graphs on n vertices, by exhaustive filtering."""
    _check_nk(n, k)
    E = num_edges(n)
    _budget.require(f"count_ramsey_graphs({n},{k})", 1 << E, _budget.graph_budget(budget))
    masks = np.array(build_incidence(n, k).col_masks, dtype=np.uint64)
    bits = default_shard_bits(E, max_shard_bits=22)

    def task(shard: int) -> int:
        lo, hi = shard_range(shard, E, bits)
        return _count_ramsey_range(masks, lo, hi)

    return sum(run_shards(task, range(1 << bits), mapper))


def divisibility_ratio(n: int, k: int):
    """a = (n-2)! / (k! (n-k)!) as an exact Fraction."""
    from fractions import Fraction

    return Fraction(factorial(n - 2), factorial(k) * factorial(n - k))


def divisibility_check(n: int, k: int) -> bool:
    if not (2 <= k <= n):
        raise ParameterError(f"need n >= k >= 2, got n={n}, k={k}")
    return factorial(n - 2) % (factorial(k) * factorial(n - k)) == 0
