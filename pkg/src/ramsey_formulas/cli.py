"""Command-line entry point.

Every command prints one JSON object (or CSV) on stdout.  Exit codes:
0 computed, 1 internal error or failed verification, 2 precondition violated,
3 budget (or sampler retry bound) exceeded, 64 malformed command line.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction
from math import comb

from . import budget as _budget
from .combinatorics import Graph, count_ramsey_graphs, divisibility_check, divisibility_ratio, num_edges
from .errors import BudgetExceeded, ParameterError, PreconditionError, SamplerExhausted, count_text
from .exact import IntPolynomial, ScaledCyclotomic, fraction_to_json
from .pnk import (SAMPLER_RETRY_BOUND, compute_P_fast, compute_P_naive, involution_check, naive_term_count,
                  phi_direct, phi_formula)
from .qnk import compute_Q
from .trig import (GE, LT, compute_B, eval_general_incidence, eval_general_mult, eval_thm21, eval_thm22,
                   sin_product_sum)
from .verify import LEVELS, verify_all

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_PRECONDITION = 2
EXIT_BUDGET = 3
EXIT_USAGE = 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def value_json(v) -> dict:
    """Exact values become tagged objects with decimal-string numbers."""
    if isinstance(v, ScaledCyclotomic):
        return v.to_json()
    if isinstance(v, IntPolynomial):
        return {"kind": "polynomial", **v.to_json()}
    if isinstance(v, bool):
        return {"kind": "boolean", "value": v}
    if isinstance(v, int):
        return {"kind": "integer", "value": str(v)}
    if isinstance(v, Fraction):
        return fraction_to_json(v)
    if isinstance(v, float):
        return {"kind": "float", "value": repr(v)}
    raise TypeError(f"no JSON form for {type(v).__name__}")


def parse_q(text: str, mode: str):
    """``p/q`` or an integer in exact mode, a decimal in float mode."""
    if mode == "exact":
        if any(c in text for c in ".eE"):
            raise ParameterError(f"--q {text!r} is a decimal; exact mode takes p/q")
        try:
            return Fraction(text)
        except ValueError:
            raise ParameterError(f"--q {text!r} is not a rational p/q") from None
    if "/" in text:
        raise ParameterError(f"--q {text!r} is a fraction; float mode takes a decimal")
    try:
        return float(text)
    except ValueError:
        raise ParameterError(f"--q {text!r} is not a decimal") from None


def _formula_report(res) -> dict:
    result = value_json(res.value)
    if res.mode == "exact":
        result["approx"] = repr(res.value.to_float())
    return {"params": res.params, "result": result, "is_zero": res.is_zero,
            "implies": res.implied_statement, "terms": res.terms_evaluated}


def _poly_implies(is_zero: bool | None) -> str | None:
    if is_zero is None:
        return None
    return GE if is_zero else LT


def cmd_ramsey_count(a, mapper):
    count = count_ramsey_graphs(a.n, a.k, a.budget, mapper)
    return {"params": {}, "result": value_json(count), "is_zero": count == 0,
            "implies": _poly_implies(count == 0), "terms": 1 << num_edges(a.n)}


def cmd_formula_mult(a, mapper):
    return _formula_report(eval_general_mult(a.n, a.k, parse_q(a.q, a.mode), a.m, a.mode, a.budget,
                                             mapper, a.checkpoint))


def cmd_formula_incidence(a, mapper):
    return _formula_report(eval_general_incidence(a.n, a.k, parse_q(a.q, a.mode), a.m, a.mode, a.budget,
                                                  mapper, a.checkpoint))


def cmd_thm21(a, mapper):
    return _formula_report(eval_thm21(a.n, a.k, a.mode, a.budget, mapper, a.checkpoint))


def cmd_thm22(a, mapper):
    return _formula_report(eval_thm22(a.n, a.k, a.mode, a.budget, mapper, a.checkpoint))


def cmd_sin_product(a, mapper):
    return _formula_report(sin_product_sum(a.n, a.k, a.mode, a.budget, mapper))


def cmd_pnk(a, mapper):
    if a.route == "naive":
        P = compute_P_naive(a.n, a.k, a.budget)
        terms = naive_term_count(a.n, a.k)
    else:
        P = compute_P_fast(a.n, a.k, a.budget, mapper)
        terms = 1 << num_edges(a.n)
    result = value_json(P)
    is_zero = implies = None
    if a.k % 4 in (2, 3):
        half = P(Fraction(1, 2))
        result["value_at_half"] = fraction_to_json(half)
        result["probability"] = fraction_to_json(-half if comb(a.n, a.k) % 2 else half)
        is_zero = P.is_zero()
        implies = _poly_implies(is_zero)
    return {"params": {"route": a.route}, "result": result, "is_zero": is_zero, "implies": implies,
            "terms": terms, "polynomial": P}


def cmd_qnk(a, mapper):
    r = compute_Q(a.n, a.k, a.budget, mapper, a.checkpoint)
    result = value_json(r.polynomial)
    result.update({"tau": str(r.tau), "value_at_tau": str(r.value_at_tau),
                   "probability": fraction_to_json(r.probability), "dim": str(r.dim)})
    zero = r.value_at_tau == 0
    return {"params": {}, "result": result, "is_zero": zero, "implies": _poly_implies(zero),
            "terms": 1 << r.dim, "polynomial": r.polynomial}


def cmd_phi_check(a, mapper):
    rng = random.Random(a.seed)
    E = num_edges(a.n)
    mismatches = []
    for _ in range(a.samples):
        G = Graph(a.n, rng.getrandbits(E))
        f, d = phi_formula(G, a.n, a.k, a.budget), phi_direct(G, a.n, a.k)
        if f != d:
            mismatches.append({"edges": str(G.edges), "formula": str(f), "direct": str(d)})
    result = {"kind": "check", "graphs": str(a.samples), "mismatches": mismatches}
    return {"params": {"samples": a.samples}, "result": result, "is_zero": None, "implies": None,
            "terms": a.samples}


def cmd_involution_check(a, mapper):
    info = involution_check(a.n, a.k, a.samples, a.seed, a.retry_bound)
    result = {"kind": "check"}
    result.update({key: (str(v) if isinstance(v, int) and not isinstance(v, bool) else v)
                   for key, v in info.items() if key not in ("n", "k")})
    return {"params": {"samples": a.samples, "retry_bound": a.retry_bound}, "result": result,
            "is_zero": None, "implies": None, "terms": a.samples}


def cmd_divisibility(a, mapper):
    ok = divisibility_check(a.n, a.k)
    result = {"kind": "check", "divisible": ok, "ratio": fraction_to_json(divisibility_ratio(a.n, a.k))}
    return {"params": {}, "result": result, "is_zero": None, "implies": None, "terms": 1}


def cmd_bivariate(a, mapper):
    B = compute_B(a.n, a.k, a.budget)
    result = {"kind": "bivariate", **B.to_json(), "value_1_1": str(B(1, 1)),
              "z0": value_json(B.specialize_z(0)), "total_degree": str(B.total_degree())}
    return {"params": {}, "result": result, "is_zero": None, "implies": None,
            "terms": 1 << (num_edges(a.n) + comb(a.n, a.k))}


def cmd_verify_all(a, mapper):
    rows = verify_all(a.level, mapper)
    result = {"kind": "table", "checks": [r.to_json() for r in rows],
              "all_passed": all(r.passed for r in rows)}
    return {"params": {"level": a.level}, "result": result, "is_zero": None, "implies": None,
            "terms": len(rows), "table": rows}


COMMANDS = {
    "ramsey-count": (cmd_ramsey_count, "count labeled k-Ramsey graphs on n vertices"),
    "formula-mult": (cmd_formula_mult, "sum over U of cosine products of multiplicities"),
    "formula-incidence": (cmd_formula_incidence, "double sum over graphs and hypergraphs"),
    "thm21": (cmd_thm21, "multiplicity cosine sum at (q, m) = (-1/2, 1)"),
    "thm22": (cmd_thm22, "incidence cosine sum at (q, m) = (-1/2, 1)"),
    "sin-product": (cmd_sin_product, "sum over graphs of sine products"),
    "pnk": (cmd_pnk, "signed enumeration polynomial P_{n,k}"),
    "qnk": (cmd_qnk, "parity-kernel polynomial Q_{n,k}"),
    "phi-check": (cmd_phi_check, "clique/anticlique census formula on random graphs"),
    "involution-check": (cmd_involution_check, "I(n,k) - M on sampled E-circ members"),
    "divisibility": (cmd_divisibility, "is (n-2)!/(k!(n-k)!) an integer"),
    "bivariate": (cmd_bivariate, "bivariate polynomial B_{n,k}(z, w)"),
    "verify-all": (cmd_verify_all, "run every desk-scale check"),
}

_NEEDS_NK = {c for c in COMMANDS if c != "verify-all"}
_NEEDS_QM = {"formula-mult", "formula-incidence"}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--budget", type=_budget.parse_budget, default=None,
                        help=f"max term count (also ${_budget.ENV_VAR}); accepts N, 2^k, 2**k")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--output", choices=("json", "csv"), default="json")
    common.add_argument("--checkpoint", default=None, help="resumable shard checkpoint file")

    parser = _Parser(prog="ramsey-formulas", description="Exact Ramsey-number formula evaluators.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, parents=[common], help=help_text, description=help_text)
        if name in _NEEDS_NK:
            p.add_argument("--n", type=int, required=True)
            p.add_argument("--k", type=int, required=True)
        if name in _NEEDS_QM:
            p.add_argument("--q", required=True, help="p/q in exact mode, decimal in float mode")
            p.add_argument("--m", type=int, required=True)
        if name == "pnk":
            p.add_argument("--route", choices=("fast", "naive"), default="fast")
        if name in ("phi-check", "involution-check"):
            p.add_argument("--samples", type=int, default=100 if name == "phi-check" else 1000)
        if name == "involution-check":
            p.add_argument("--retry-bound", type=int, default=SAMPLER_RETRY_BOUND)
        if name == "verify-all":
            p.add_argument("--level", choices=LEVELS, default="desk")
    return parser


def _config(a) -> dict:
    cfg = {"mode": a.mode, "budget": None if a.budget is None else str(a.budget), "threads": a.threads,
           "seed": a.seed, "output": a.output, "checkpoint": a.checkpoint,
           "budget_env": _budget.ENV_VAR}
    for key in ("level", "route", "samples", "retry_bound"):
        if hasattr(a, key):
            cfg[key] = getattr(a, key)
    return cfg


def to_csv(command: str, payload: dict, extra: dict) -> str:
    if "polynomial" in extra:
        return extra["polynomial"].to_csv()
    if "table" in extra:
        lines = ["id,name,passed,detail"]
        lines += [f'{r.id},"{r.name}",{str(r.passed).lower()},"{r.detail}"' for r in extra["table"]]
        return "\n".join(lines) + "\n"
    lines = ["key,value"]
    for key in ("command", "n", "k", "is_zero", "implies", "terms", "elapsed_ms"):
        lines.append(f"{key},{payload.get(key)}")
    lines.append(f"result,\"{json.dumps(payload['result'], sort_keys=True).replace(chr(34), chr(34) * 2)}\"")
    return "\n".join(lines) + "\n"


def emit(payload: dict, extra: dict, fmt: str) -> str:
    if fmt == "csv":
        return to_csv(payload["command"], payload, extra)
    return json.dumps(payload, sort_keys=True) + "\n"


def _glue_values(argv: list[str]) -> list[str]:
    # argparse would read "--q -1/2" as two flags
    out = []
    it = iter(argv)
    for tok in it:
        if tok in ("--q", "--m"):
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def run(argv=None) -> tuple[int, str]:
    """Parse, dispatch and serialize; returns (exit code, stdout text)."""
    argv = sys.argv[1:] if argv is None else list(argv)
    a = build_parser().parse_args(_glue_values(argv))
    if a.threads < 1:
        raise SystemExit(EXIT_USAGE)
    fn = COMMANDS[a.command][0]
    t0 = time.perf_counter()
    pool = ThreadPoolExecutor(a.threads) if a.threads > 1 else None
    try:
        report = fn(a, pool.map if pool else None)
    finally:
        if pool:
            pool.shutdown()
    extra = {key: report.pop(key) for key in ("polynomial", "table") if key in report}
    payload = {
        "command": a.command,
        "n": getattr(a, "n", None),
        "k": getattr(a, "k", None),
        "mode": a.mode,
        "elapsed_ms": round((time.perf_counter() - t0) * 1000),
        "config": _config(a),
        **report,
    }
    code = EXIT_OK
    if "table" in extra and not payload["result"]["all_passed"]:
        code = EXIT_INTERNAL
    return code, emit(payload, extra, a.output)


def main(argv=None) -> int:
    try:
        code, text = run(argv)
    except PreconditionError as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True))
        return EXIT_PRECONDITION
    except BudgetExceeded as exc:
        print(f"BudgetExceeded: {exc}", file=sys.stderr)
        print(json.dumps({"error": "BudgetExceeded", "message": str(exc), "terms": count_text(exc.terms),
                          "budget": count_text(exc.budget)}, sort_keys=True))
        return EXIT_BUDGET
    except SamplerExhausted as exc:
        print(f"SamplerExhausted: {exc}", file=sys.stderr)
        print(json.dumps({"error": "SamplerExhausted", "message": str(exc)}, sort_keys=True))
        return EXIT_BUDGET
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
