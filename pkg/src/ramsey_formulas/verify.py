"""One-shot reproduction of every desk-scale check, as a pass/fail table.

Each check is a function returning ``(passed, detail)``; details contain only
computed values, never timings, so the table is reproducible byte for byte.
"""

from __future__ import annotations

import math
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable

from .combinatorics import Graph, count_ramsey_graphs, divisibility_check, num_edges
from .errors import DivisibilityViolated
from .pnk import (compute_P_fast, compute_P_naive, involution_check, phi_direct, phi_formula,
                  ramsey_probability_via_P, top_coefficient_split, turan_vanishing_check)
from .qnk import compute_Q, compute_Q_naive, ramsey_probability_via_Q
from .trig import (compute_B, eval_general_incidence, eval_general_mult, eval_thm21, eval_thm22,
                   sin_product_sum)

LEVELS = ("desk", "extended")
IDENTITY_CASES = [(n, q, m) for n in (4, 5) for q, m in ((Fraction(-1, 2), 1), (Fraction(1, 3), 2), (Fraction(0), 1))]


@dataclass
class CheckResult:
    id: int
    name: str
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"id": self.id, "name": self.name, "passed": self.passed, "detail": self.detail}


def check_ramsey_oracle(mapper=None, level="desk"):
    got = {nk: count_ramsey_graphs(*nk, mapper=mapper) for nk in ((5, 3), (6, 3), (7, 3))}
    ok = got == {(5, 3): 12, (6, 3): 0, (7, 3): 0}
    return ok, " ".join(f"count{n}{k}={v}" for (n, k), v in got.items())


def check_mult_zero(mapper=None, level="desk"):
    parts, ok = [], True
    for n in (3, 4, 5, 6):
        r = eval_general_mult(n, 3, Fraction(-1, 2), 1, mapper=mapper)
        ok &= r.is_zero == (n == 6)
        if level == "extended":
            f = eval_general_mult(n, 3, -0.5, 1, mode="float", mapper=mapper)
            ok &= math.isclose(f.value, r.value.to_float(), rel_tol=1e-9, abs_tol=1e-9)
        parts.append(f"n={n}:{'zero' if r.is_zero else 'nonzero'}")
    return ok, " ".join(parts)


def check_identity(mapper=None, level="desk"):
    parts, ok = [], True
    for n, q, m in IDENTITY_CASES:
        t3 = eval_general_mult(n, 3, q, m, mapper=mapper).value
        t4 = eval_general_incidence(n, 3, q, m, mapper=mapper).value
        eq = t4 == t3 * (1 << num_edges(n))
        ok &= eq
        parts.append(f"({n},{q},{m}):{'eq' if eq else 'NE'}")
    return ok, " ".join(parts)


def check_sin_product(mapper=None, level="desk"):
    a = sin_product_sum(5, 3, mapper=mapper)
    b = sin_product_sum(6, 3, mapper=mapper)
    ok = a.value.as_fraction() == Fraction(729, 256) and b.is_zero
    return ok, f"s53={a.value.as_fraction()} s63_zero={b.is_zero}"


def check_pnk(mapper=None, level="desk"):
    P = {nk: compute_P_fast(*nk, mapper=mapper) for nk in ((4, 3), (5, 3), (6, 3), (7, 3))}
    ok = compute_P_naive(4, 3) == P[(4, 3)] and compute_P_naive(5, 3) == P[(5, 3)]
    prob = ramsey_probability_via_P(5, 3, mapper=mapper).probability
    ok &= prob == Fraction(3, 256)
    ok &= P[(6, 3)].is_zero() and P[(7, 3)].is_zero() and not P[(4, 3)].is_zero()
    ok &= all(turan_vanishing_check(p, n, k) and p.degree() <= num_edges(n) for (n, k), p in P.items())
    ok &= all(p(0) == 0 for p in P.values())
    split = top_coefficient_split(7, 3)
    ok &= split["rows_nonempty"] == P[(7, 3)].coeff(21) == split["restricted"] and split["e_circ"] == 0
    return ok, (f"p53half={prob} p63_zero={P[(6, 3)].is_zero()} p73_zero={P[(7, 3)].is_zero()} "
                f"top73={split['rows_nonempty']}/{split['e_circ']}")


def check_qnk(mapper=None, level="desk"):
    ok = compute_Q_naive(4, 3) == compute_Q(4, 3, mapper=mapper).polynomial
    parts = []
    for n in (4, 5, 6):
        r = compute_Q(n, 3, mapper=mapper)
        Q = r.polynomial
        cols = comb(n, 3)
        ok &= Q(1) == 2**r.dim and Q.degree() == cols and Q.leading_coefficient() == 1
        ok &= all(v >= 0 for v in Q.coeffs.values())
        parts.append(f"Q{n}3(-3)={r.value_at_tau} d={r.dim}")
        if n == 5:
            ok &= r.value_at_tau == 12288
        if n == 6:
            ok &= r.value_at_tau == 0
    return ok, " ".join(parts)


def check_triple(mapper=None, level="desk"):
    parts, ok = [], True
    for n in (4, 5, 6):
        direct = Fraction(count_ramsey_graphs(n, 3, mapper=mapper), 1 << num_edges(n))
        via_P = ramsey_probability_via_P(n, 3, mapper=mapper, oracle=False).probability
        via_Q = ramsey_probability_via_Q(n, 3, mapper=mapper, oracle=False, cross_check_P=False).probability
        ok &= direct == via_P == via_Q
        parts.append(f"({n},3)={direct}")
    return ok, " ".join(parts)


def check_phi(mapper=None, level="desk", seed=0, graphs=100):
    rng = random.Random(seed)
    mismatches = 0
    for n in (5, 6, 7):
        for _ in range(graphs):
            G = Graph(n, rng.getrandbits(num_edges(n)))
            mismatches += phi_formula(G, n, 3) != phi_direct(G, n, 3)
    k5 = phi_formula(Graph.complete(5), 5, 3)
    c5 = phi_formula(Graph.cycle(5), 5, 3)
    ok = mismatches == 0 and k5 == 10 and c5 == 0
    return ok, f"mismatches={mismatches}/{3 * graphs} phiK5={k5} phiC5={c5}"


def check_involution(mapper=None, level="desk", seed=0):
    samples = 10**4 if level == "extended" else 10**3
    a = involution_check(7, 3, samples, seed)
    b = involution_check(5, 3, samples, seed)
    ok = a["domain_preserved"] and a["involutive"] and a["sign_reversing"]
    ok &= b["domain_preserved"] and b["involutive"] and b["sign_reversing_count"] == 0
    return ok, f"(7,3) reversing={a['sign_reversing_count']}/{samples} (5,3) reversing={b['sign_reversing_count']}/{samples}"


def check_divisibility(mapper=None, level="desk"):
    good = [divisibility_check(n, k) for n, k in ((43, 5), (44, 5), (48, 5))]
    bad = [divisibility_check(n, k) for n, k in ((6, 3), (45, 5))]
    refused = 0
    for fn in (eval_thm21, eval_thm22):
        try:
            fn(6, 3)
        except DivisibilityViolated:
            refused += 1
    ok = all(good) and not any(bad) and refused == 2
    return ok, f"pass={good} fail={bad} refused={refused}/2"


def check_bivariate(mapper=None, level="desk"):
    B = compute_B(4, 3)
    b11 = B(1, 1)
    b0 = B.specialize_z(0)
    ok = b11 == 1024 and b0.coeffs == {0: 64} and B.total_degree() == 16
    return ok, f"B(1,1)={b11} B(0,w)={b0(1)} deg={B.total_degree()}"


def sharded_fingerprint(mapper=None) -> list:
    """Results of the sharded evaluators, serialized; must not depend on the mapper."""
    return [
        count_ramsey_graphs(6, 3, mapper=mapper),
        eval_general_mult(5, 3, Fraction(1, 3), 2, mapper=mapper).value.to_json(),
        eval_general_incidence(4, 3, Fraction(-1, 2), 1, mapper=mapper).value.to_json(),
        sin_product_sum(5, 3, mapper=mapper).value.to_json(),
        compute_P_fast(5, 3, mapper=mapper).to_json(),
        compute_Q(5, 3, mapper=mapper).polynomial.to_json(),
    ]


def check_determinism(mapper=None, level="desk"):
    serial = sharded_fingerprint(map)
    with ThreadPoolExecutor(8) as pool:
        threaded = sharded_fingerprint(pool.map)
    ok = serial == threaded
    return ok, f"threads1_vs_8={'identical' if ok else 'different'} items={len(serial)}"


CHECKS: list[tuple[int, str, Callable]] = [
    (1, "ramsey oracle", check_ramsey_oracle),
    (2, "T3 zero iff n >= 6 (k=3)", check_mult_zero),
    (3, "T4 = 2^C(n,2) T3", check_identity),
    (4, "sin-product sums", check_sin_product),
    (5, "P_{n,k}", check_pnk),
    (6, "Q_{n,k}", check_qnk),
    (7, "probability triple agreement", check_triple),
    (8, "Phi census", check_phi),
    (9, "involution sigma", check_involution),
    (10, "divisibility guard", check_divisibility),
    (11, "bivariate B_{4,3}", check_bivariate),
    (12, "thread-count determinism", check_determinism),
]


def verify_all(level: str = "desk", mapper=None, only: set[int] | None = None) -> list[CheckResult]:
    out = []
    for cid, name, fn in CHECKS:
        if only is not None and cid not in only:
            continue
        passed, detail = fn(mapper=mapper, level=level)
        out.append(CheckResult(cid, name, bool(passed), detail))
    return out
