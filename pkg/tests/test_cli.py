from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction

import pytest

from ramsey_formulas.cli import main, parse_q, run
from ramsey_formulas.errors import ParameterError
from ramsey_formulas.exact import IntPolynomial, ScaledCyclotomic


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_formula_mult_zero(capsys):
    code, out, _ = call(capsys, "formula-mult", "--n", "6", "--k", "3", "--q", "-1/2", "--m", "1", "--mode", "exact")
    assert code == 0
    d = json.loads(out)
    assert d["is_zero"] is True and d["implies"] == "n >= R(k)"
    assert d["terms"] == 2**20
    assert ScaledCyclotomic.from_json(d["result"]).is_zero()
    assert set(d) >= {"command", "n", "k", "params", "result", "is_zero", "implies", "terms", "elapsed_ms",
                      "mode", "config"}
    assert d["config"]["threads"] == 1 and d["config"]["seed"] == 0


def test_exact_value_object(capsys):
    code, out, _ = call(capsys, "sin-product", "--n", "5", "--k", "3")
    d = json.loads(out)
    v = ScaledCyclotomic.from_json(d["result"])
    assert v.as_fraction() == Fraction(729, 256)
    assert all(isinstance(c, str) for c in d["result"]["coeffs"])


def test_exit_codes(capsys):
    code, out, err = call(capsys, "thm21", "--n", "6", "--k", "3")
    assert code == 2 and "DivisibilityViolated" in err
    assert json.loads(out)["error"] == "DivisibilityViolated"
    assert call(capsys, "thm22", "--n", "6", "--k", "3")[0] == 2
    assert call(capsys, "pnk", "--n", "6", "--k", "3", "--route", "naive")[0] == 3
    assert call(capsys, "thm21", "--n", "8", "--k", "3")[0] == 3
    assert call(capsys, "phi-check", "--n", "6", "--k", "4")[0] == 2
    assert call(capsys, "ramsey-count", "--n", "6", "--k", "3", "--budget", "2^10")[0] == 3
    assert call(capsys, "formula-mult", "--n", "4", "--k", "3", "--q", "0.5", "--m", "1")[0] == 2
    assert call(capsys, "formula-mult", "--n", "4", "--k", "3", "--q", "1/2", "--m", "1", "--mode", "float")[0] == 2


def test_usage_errors(capsys):
    code, out, err = call(capsys, "qnk", "--n", "4", "--k", "3", "--bogus")
    assert code == 64 and "usage" in err and out == ""
    assert call(capsys, "nonsense")[0] == 64
    assert call(capsys, "qnk", "--n", "4")[0] == 64


def test_budget_env(capsys, monkeypatch):
    monkeypatch.setenv("RAMSEY_BUDGET", "2^10")
    assert call(capsys, "ramsey-count", "--n", "6", "--k", "3")[0] == 3
    code, out, _ = call(capsys, "ramsey-count", "--n", "5", "--k", "3")
    assert code == 0 and json.loads(out)["result"] == {"kind": "integer", "value": "12"}


def test_parse_q():
    assert parse_q("-1/2", "exact") == -0.5
    assert parse_q("3", "exact") == 3
    assert parse_q("0.25", "float") == 0.25
    for text, mode in (("0.5", "exact"), ("1/2", "float"), ("x", "exact"), ("x", "float")):
        with pytest.raises(ParameterError):
            parse_q(text, mode)


def test_polynomial_roundtrip_and_csv(capsys):
    code, out, _ = call(capsys, "pnk", "--n", "5", "--k", "3")
    d = json.loads(out)
    P = IntPolynomial.from_json(d["result"])
    assert P(Fraction(1, 2)) == Fraction(3, 256) and P.coeff(5) == 12
    assert d["result"]["probability"] == {"kind": "rational", "num": "3", "den": "256"}
    code, csv_text, _ = call(capsys, "qnk", "--n", "5", "--k", "3", "--output", "csv")
    assert csv_text.splitlines()[0] == "degree,coefficient"
    Q = IntPolynomial.from_csv(csv_text)
    assert Q(-3) == 12288
    code, out, _ = call(capsys, "qnk", "--n", "5", "--k", "3")
    assert IntPolynomial.from_json(json.loads(out)["result"]) == Q


def test_pnk_other_residue(capsys):
    code, out, _ = call(capsys, "pnk", "--n", "5", "--k", "4")
    d = json.loads(out)
    assert code == 0 and d["is_zero"] is None and "probability" not in d["result"]


def test_misc_commands(capsys):
    d = json.loads(call(capsys, "divisibility", "--n", "43", "--k", "5")[1])
    assert d["result"]["divisible"] is True
    d = json.loads(call(capsys, "bivariate", "--n", "4", "--k", "3")[1])
    assert d["result"]["value_1_1"] == "1024" and d["result"]["total_degree"] == "16"
    assert d["result"]["z0"]["coeffs"] == {"0": "64"}
    d = json.loads(call(capsys, "phi-check", "--n", "6", "--k", "3", "--samples", "20")[1])
    assert d["result"]["mismatches"] == []
    d = json.loads(call(capsys, "involution-check", "--n", "7", "--k", "3", "--samples", "100")[1])
    assert d["result"]["sign_reversing"] is True
    code, out, _ = call(capsys, "involution-check", "--n", "5", "--k", "3", "--retry-bound", "2")
    assert code == 3 and json.loads(out)["error"] == "SamplerExhausted"
    d = json.loads(call(capsys, "thm21", "--n", "6", "--k", "3", "--mode", "float")[1])
    assert d["error"] == "DivisibilityViolated"
    d = json.loads(call(capsys, "formula-incidence", "--n", "4", "--k", "3", "--q", "1/3", "--m", "2")[1])
    assert d["implies"] == "n < R(k)"


def test_determinism_apart_from_elapsed():
    def strip(text):
        d = json.loads(text)
        d.pop("elapsed_ms")
        return json.dumps(d, sort_keys=True)

    argv = ["formula-mult", "--n", "5", "--k", "3", "--q", "1/3", "--m", "2", "--threads", "3"]
    assert strip(run(argv)[1]) == strip(run(argv)[1])
    a = json.loads(run(argv)[1])["result"]
    b = json.loads(run(argv[:-1] + ["1"])[1])["result"]
    assert a == b


def test_checkpoint_flag(tmp_path, capsys):
    path = tmp_path / "ck.json"
    argv = ["qnk", "--n", "5", "--k", "3", "--checkpoint", str(path)]
    first = json.loads(call(capsys, *argv)[1])["result"]
    assert path.exists()
    assert json.loads(call(capsys, *argv)[1])["result"] == first


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "ramsey_formulas", "ramsey-count", "--n", "5", "--k", "3"],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["result"]["value"] == "12"
