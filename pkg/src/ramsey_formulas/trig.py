"""Trigonometric sums whose vanishing decides ``n >= R(k)``.

T3(q, m) = sum_U (-1)^((m+1)|U|) prod_e cos(2 pi / (k(k-1)) * (q C(n-2,k-2) + m mult(e,U)))
T4(q, m) = sum_{G,H} (-1)^|E(H)| cos(pi q a (4|E(G)| - n(n-1)) + 4 pi m i(G,H) / (k(k-1)))

with a = (n-2)!/(k!(n-k)!).  In exact mode every cosine is an element of
Z[zeta_N][1/2] for one global N per evaluation, so "is zero" is decided by
comparing canonical coefficient vectors.

The Gray walks never touch cyclotomic values.  A product of cosines depends
only on how many edges have each multiplicity residue (mod the period of the
angle), so the walk tallies residue histograms and the exact arithmetic runs
once per distinct histogram.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb
from numbers import Rational

import numpy as np

from . import budget as _budget
from ._kernels import walk_incidence_counts, walk_mult_keys
from .combinatorics import (_check_nk, build_incidence, divisibility_check, divisibility_ratio,
                            num_edges)
from .errors import DivisibilityViolated, IrrationalQInExactMode, ParameterError
from .exact import BivariatePolynomial, ScaledCyclotomic, common_order, cos_pi, sin_pi
from .parallel import Checkpoint, Mapper, default_shard_bits, run_shards

GE = "n >= R(k)"
LT = "n < R(k)"
FLOAT_ZERO_TOL = 1e-9
_INT64_LIMIT = 2**62


@dataclass
class FormulaResult:
    formula: str
    n: int
    k: int
    params: dict
    mode: str
    value: ScaledCyclotomic | float
    is_zero: bool
    implied_statement: str | None
    terms_evaluated: int
    elapsed: float = 0.0
    extra: dict = field(default_factory=dict)

    @property
    def certified(self) -> bool:
        return self.mode == "exact"


def _coerce_q(q, mode: str):
    if mode == "exact":
        if isinstance(q, str):
            q = Fraction(q)
        if isinstance(q, float) or not isinstance(q, Rational):
            raise IrrationalQInExactMode(f"exact mode needs a rational q, got {q!r}")
        return Fraction(q)
    if mode == "float":
        return float(q)
    raise ParameterError(f"unknown mode {mode!r}")


def _implies(is_zero: bool, decisive_zero: bool) -> str | None:
    # nonzero at any (q, m) rules out n >= R(k); zero only decides at (q, m) = (-1/2, 1)
    if not is_zero:
        return LT
    return GE if decisive_zero else None


def _float_is_zero(total: float, terms: int) -> bool:
    return abs(total) < FLOAT_ZERO_TOL * terms


class _PowerCache:
    """Memoized integer powers of a few fixed exact (or float) bases."""

    def __init__(self, bases):
        self.bases = bases
        self.cache: dict[tuple[int, int], object] = {}

    def power(self, r: int, h: int):
        got = self.cache.get((r, h))
        if got is None:
            got = self.bases[r] ** h
            self.cache[(r, h)] = got
        return got


def _checkpoint_codec(mode: str):
    if mode == "exact":
        return (lambda v: v.to_json()), ScaledCyclotomic.from_json
    return (lambda v: repr(v)), float


# --- T3: sum over U of products of cosines of multiplicities -----------------


def mult_period(k: int, m: int) -> int:
    """Period of the per-edge cosine as a function of the multiplicity."""
    kk = k * (k - 1)
    return kk // math.gcd(m, kk)


def mult_angle(n: int, k: int, q, m: int, residue: int):
    """Angle (in units of pi) of the cosine for an edge whose multiplicity is ``residue``."""
    return 2 * (q * comb(n - 2, k - 2) + m * residue) / (k * (k - 1))


def gray_mult_trace(n: int, k: int, m: int, top: int = 0, low_bits: int | None = None):
    """Raw Gray walk output: residue-histogram key and |U| parity at every step."""
    inc = build_incidence(n, k)
    E, cols = num_edges(n), len(inc.col_masks)
    low_bits = cols if low_bits is None else low_bits
    period = mult_period(k, m)
    base = E + 1
    if base**period >= _INT64_LIMIT:
        raise ParameterError(f"histogram key for n={n}, period {period} does not fit in 64 bits")
    bpow = np.array([base**r for r in range(period)], dtype=np.int64)
    keys = np.empty(1 << low_bits, dtype=np.int64)
    par = np.empty(1 << low_bits, dtype=np.int8)
    walk_mult_keys(inc.col_edges_array(), E, period, bpow, top, low_bits, keys, par)
    return keys, par


def mult_key(n: int, k: int, m: int, members: int) -> int:
    """Histogram key of one subset family computed from scratch (reference for the walk)."""
    inc = build_incidence(n, k)
    period = mult_period(k, m)
    base = num_edges(n) + 1
    return sum(base ** (bin(row & members).count("1") % period) for row in inc.row_masks)


def eval_general_mult(n: int, k: int, q, m: int, mode: str = "exact", budget: int | None = None,
                      mapper: Mapper | None = None, checkpoint: str | None = None,
                      shard_bits: int | None = None) -> FormulaResult:
    """T3(q, m), exhaustively over all 2**C(n,k) families U."""
    _check_nk(n, k)
    t0 = time.perf_counter()
    q = _coerce_q(q, mode)
    cols = comb(n, k)
    terms = 1 << cols
    _budget.require(f"eval_general_mult({n},{k})", terms, _budget.term_budget(budget))
    E = num_edges(n)
    period = mult_period(k, m)
    base = E + 1
    if base**period >= _INT64_LIMIT:
        raise ParameterError(f"histogram key for n={n}, period {period} does not fit in 64 bits")

    angles = [mult_angle(n, k, q, m, r) for r in range(period)]
    if mode == "exact":
        N = common_order(angles)
        cosines = _PowerCache([cos_pi(a, N) for a in angles])
        zero = ScaledCyclotomic.zero(N)
    else:
        cosines = _PowerCache([math.cos(math.pi * a) for a in angles])
    bits = default_shard_bits(cols) if shard_bits is None else shard_bits
    flip = (m + 1) % 2  # sign is (-1)^((m+1)|U|)

    def task(shard: int):
        keys, par = gray_mult_trace(n, k, m, top=shard << (cols - bits), low_bits=cols - bits)
        uniq, counts = np.unique(keys * 2 + par, return_counts=True)
        signed: dict[int, int] = {}
        for code, cnt in zip(uniq.tolist(), counts.tolist()):
            key, p = divmod(code, 2)
            signed[key] = signed.get(key, 0) + (-cnt if p and flip else cnt)
        parts = []
        for key, cnt in sorted(signed.items()):
            if cnt == 0:
                continue
            term = None
            for r in range(period):
                h = key // base**r % base
                if h:
                    f = cosines.power(r, h)
                    term = f if term is None else term * f
            parts.append(term * cnt if term is not None else cnt)
        if mode == "exact":
            total = zero
            for p in parts:
                total = total + p
            return total
        return math.fsum(parts)

    ckpt = None
    if checkpoint is not None:
        enc, dec = _checkpoint_codec(mode)
        key = {"formula": "general_mult", "n": n, "k": k, "q": str(q), "m": m, "mode": mode}
        ckpt = Checkpoint(checkpoint, key, cols, bits, enc, dec)
    partials = run_shards(task, range(1 << bits), mapper, ckpt)
    if mode == "exact":
        value = zero
        for p in partials:
            value = value + p
        is_zero = value.is_zero()
    else:
        value = math.fsum(partials)
        is_zero = _float_is_zero(value, terms)
    decisive = q == Fraction(-1, 2) and m == 1
    return FormulaResult("general_mult", n, k, {"q": str(q), "m": m}, mode, value, is_zero,
                         _implies(is_zero, decisive), terms, time.perf_counter() - t0,
                         {"shard_bits": bits})


def thm_sign(n: int, k: int) -> int:
    """(-1)^(a * n(n-1)/2), valid when a = (n-2)!/(k!(n-k)!) is an integer."""
    a = divisibility_ratio(n, k)
    if a.denominator != 1:
        raise DivisibilityViolated(f"(n-2)!/(k!(n-k)!) = {a} is not an integer for n={n}, k={k}")
    return -1 if (a.numerator * num_edges(n)) % 2 else 1


def _require_divisible(n: int, k: int) -> None:
    # checked before the vertex cap so large admissible n report the budget, not the cap
    if not (2 <= k <= n):
        raise ParameterError(f"need 2 <= k <= n, got n={n}, k={k}")
    if not divisibility_check(n, k):
        raise DivisibilityViolated(
            f"(n-2)!/(k!(n-k)!) = {divisibility_ratio(n, k)} is not an integer for n={n}, k={k}")


def _signed(res: FormulaResult, sign: int, name: str) -> FormulaResult:
    res.formula = name
    res.value = res.value * sign if sign == -1 else res.value
    res.extra["sign"] = sign
    return res


def eval_thm21(n: int, k: int, mode: str = "exact", budget: int | None = None,
               mapper: Mapper | None = None, checkpoint: str | None = None) -> FormulaResult:
    """sum_U prod_e cos(2 pi mult(e,U) / (k(k-1))), via sign * T3(-1/2, 1)."""
    _require_divisible(n, k)
    _budget.require(f"eval_thm21({n},{k})", 1 << comb(n, k), _budget.term_budget(budget))
    sign = thm_sign(n, k)
    res = eval_general_mult(n, k, Fraction(-1, 2) if mode == "exact" else -0.5, 1, mode,
                            budget, mapper, checkpoint)
    return _signed(res, sign, "thm21")


# --- T4: double sum over graphs and hypergraphs ------------------------------


def incidence_period(k: int, m: int) -> int:
    kk = k * (k - 1)
    return kk // math.gcd(2 * m, kk)


def incidence_angle(n: int, k: int, q, m: int, edges: int, inc: int):
    """Angle in units of pi of the (G, H) term with |E(G)| = edges and i(G,H) = inc."""
    a = divisibility_ratio(n, k)
    if isinstance(q, float):
        a = float(a)
    return q * a * (4 * edges - n * (n - 1)) + Fraction(4 * m * inc, k * (k - 1))


def incidence_counts(n: int, k: int, m: int, top: int = 0, low_bits: int | None = None) -> np.ndarray:
    """counts[|E(H)| % 2, |E(G)|, i(G,H) % period] over one shard of the double Gray walk."""
    inc = build_incidence(n, k)
    E, cols = num_edges(n), len(inc.col_masks)
    low_bits = cols if low_bits is None else low_bits
    period = incidence_period(k, m)
    counts = np.zeros((2, E + 1, period), dtype=np.int64)
    walk_incidence_counts(inc.col_edges_array(), E, period, top, low_bits, counts)
    return counts


def eval_general_incidence(n: int, k: int, q, m: int, mode: str = "exact", budget: int | None = None,
                           mapper: Mapper | None = None, checkpoint: str | None = None,
                           shard_bits: int | None = None) -> FormulaResult:
    """T4(q, m), exhaustively over all (G, H) pairs."""
    _check_nk(n, k)
    t0 = time.perf_counter()
    q = _coerce_q(q, mode)
    E, cols = num_edges(n), comb(n, k)
    terms = 1 << (E + cols)
    _budget.require(f"eval_general_incidence({n},{k})", terms, _budget.term_budget(budget))
    period = incidence_period(k, m)
    grid = [(e, r) for e in range(E + 1) for r in range(period)]
    if mode == "exact":
        angles = {g: incidence_angle(n, k, q, m, *g) for g in grid}
        N = common_order(angles.values())
        cosv = {g: cos_pi(a, N) for g, a in angles.items()}
        zero = ScaledCyclotomic.zero(N)
    else:
        cosv = {g: math.cos(math.pi * float(incidence_angle(n, k, q, m, *g))) for g in grid}
    bits = default_shard_bits(cols, max_shard_bits=max(0, 20 - E)) if shard_bits is None else shard_bits

    def task(shard: int):
        counts = incidence_counts(n, k, m, top=shard << (cols - bits), low_bits=cols - bits)
        net = counts[0] - counts[1]
        parts = [cosv[(e, r)] * int(net[e, r]) for e, r in grid if net[e, r]]
        if mode == "exact":
            total = zero
            for p in parts:
                total = total + p
            return total
        return math.fsum(parts)

    ckpt = None
    if checkpoint is not None:
        enc, dec = _checkpoint_codec(mode)
        key = {"formula": "general_incidence", "n": n, "k": k, "q": str(q), "m": m, "mode": mode}
        ckpt = Checkpoint(checkpoint, key, cols, bits, enc, dec)
    partials = run_shards(task, range(1 << bits), mapper, ckpt)
    if mode == "exact":
        value = zero
        for p in partials:
            value = value + p
        is_zero = value.is_zero()
    else:
        value = math.fsum(partials)
        is_zero = _float_is_zero(value, terms)
    decisive = q == Fraction(-1, 2) and m == 1
    return FormulaResult("general_incidence", n, k, {"q": str(q), "m": m}, mode, value, is_zero,
                         _implies(is_zero, decisive), terms, time.perf_counter() - t0,
                         {"shard_bits": bits})


def eval_thm22(n: int, k: int, mode: str = "exact", budget: int | None = None,
               mapper: Mapper | None = None, checkpoint: str | None = None) -> FormulaResult:
    """sum_{G,H} (-1)^|E(H)| cos(4 pi i(G,H) / (k(k-1))), via sign * T4(-1/2, 1)."""
    _require_divisible(n, k)
    _budget.require(f"eval_thm22({n},{k})", 1 << (num_edges(n) + comb(n, k)), _budget.term_budget(budget))
    sign = thm_sign(n, k)
    res = eval_general_incidence(n, k, Fraction(-1, 2) if mode == "exact" else -0.5, 1, mode,
                                 budget, mapper, checkpoint)
    return _signed(res, sign, "thm22")


# --- sin-product instance and the bivariate polynomial -----------------------


def sin_product_sum(n: int, k: int, mode: str = "exact", budget: int | None = None,
                    mapper: Mapper | None = None) -> FormulaResult:
    """sum over graphs x of prod_S sin(pi * |E(x) inside S| / C(k,2)); every term is >= 0."""
    _check_nk(n, k)
    t0 = time.perf_counter()
    E = num_edges(n)
    terms = 1 << E
    _budget.require(f"sin_product_sum({n},{k})", terms, _budget.term_budget(budget))
    inc = build_incidence(n, k)
    c = comb(k, 2)
    base = len(inc.col_masks) + 1
    if base ** max(c - 1, 1) >= _INT64_LIMIT:
        raise ParameterError(f"histogram key for n={n}, k={k} does not fit in 64 bits")
    masks = np.array(inc.col_masks, dtype=np.uint64)
    if mode == "exact":
        N = 4 * c
        sines = _PowerCache([sin_pi(Fraction(j, c), N) for j in range(c + 1)])
        zero = ScaledCyclotomic.zero(N)
    elif mode == "float":
        sines = _PowerCache([math.sin(math.pi * j / c) for j in range(c + 1)])
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    bpow = np.array([base ** (j - 1) if 0 < j < c else 0 for j in range(c + 1)], dtype=np.int64)
    bits = default_shard_bits(E, max_shard_bits=20)

    def task(shard: int):
        width = 1 << (E - bits)
        x = np.arange(shard * width, (shard + 1) * width, dtype=np.uint64)
        alive = np.ones(x.shape, dtype=bool)
        key = np.zeros(x.shape, dtype=np.int64)
        for mask in masks:
            s = np.bitwise_count(x & mask).astype(np.int64)
            alive &= (s != 0) & (s != c)
            key += bpow[s]
        uniq, counts = np.unique(key[alive], return_counts=True)
        parts = []
        for key_, cnt in zip(uniq.tolist(), counts.tolist()):
            term = None
            for j in range(1, c):
                h = key_ // base ** (j - 1) % base
                if h:
                    f = sines.power(j, h)
                    term = f if term is None else term * f
            parts.append(term * cnt)
        if mode == "exact":
            total = zero
            for p in parts:
                total = total + p
            return total
        return math.fsum(parts)

    partials = run_shards(task, range(1 << bits), mapper)
    if mode == "exact":
        value = zero
        for p in partials:
            value = value + p
        is_zero = value.is_zero()
    else:
        value = math.fsum(partials)
        is_zero = _float_is_zero(value, terms)
    return FormulaResult("sin_product", n, k, {}, mode, value, is_zero, GE if is_zero else LT,
                         terms, time.perf_counter() - t0)


def compute_B(n: int, k: int, budget: int | None = None) -> BivariatePolynomial:
    """B_{n,k}(z, w) = sum_{G,H} z^|E(H)| w^i(G,H), as an exact coefficient table."""
    _check_nk(n, k)
    E, cols = num_edges(n), comb(n, k)
    _budget.require(f"compute_B({n},{k})", 1 << (E + cols), _budget.term_budget(budget))
    inc = build_incidence(n, k)
    g = np.arange(1 << E, dtype=np.int64)
    gbits = ((g[:, None] >> np.arange(E)) & 1).astype(np.int64)
    table: dict[tuple[int, int], int] = {}
    for h in range(1 << cols):
        mult = np.array([bin(row & h).count("1") for row in inc.row_masks], dtype=np.int64)
        hist = np.bincount(gbits @ mult)
        size = bin(h).count("1")
        for i, cnt in enumerate(hist.tolist()):
            if cnt:
                table[(size, i)] = table.get((size, i), 0) + cnt
    return BivariatePolynomial(table)
