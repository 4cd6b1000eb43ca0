import json
import os
import subprocess
import sys
from fractions import Fraction
from importlib import resources

import jsonschema
import mpmath
import pytest

from germflow.cli import main

SCHEMA = json.loads(resources.files("germflow").joinpath("schema/output-v1.json").read_text())
VALIDATOR = jsonschema.Draft202012Validator(SCHEMA)


def call(capsys, *argv):
    code = main(["--json" if a == "@json" else a for a in argv])
    out = capsys.readouterr()
    doc = json.loads(out.out) if out.out.strip().startswith("{") else None
    if doc is not None:
        VALIDATOR.validate(doc)
    return code, doc, out


CORPUS = [
    (["exp", "--order", "6", "--t", "1/3", "z^2"], 0),
    (["exp", "--order", "6", "--mode", "float", "--t", "1/2", "z/3 + z^2"], 0),
    (["log", "--order", "8", "z + z^2"], 0),
    (["log", "--order", "8", "--mode", "float", "z + z^2"], 0),
    (["flow", "--order", "8", "z/2 + z^2"], 0),
    (["flow", "--order", "8", "--eval-t", "1/2", "z + z^3"], 0),
    (["eval", "--order", "8", "--t", "1/2", "z/4 + z^2"], 0),
    (["eval", "--order", "6", "--mode", "float", "--t", "1/3", "-z/2 + z^2"], 0),
    (["root", "--order", "8", "--k", "3", "z/8 + z^2"], 0),
    (["root", "--order", "8", "exp(i*pi/2)*z + z^5"], 2),
    (["root", "--order", "4", "zeta(2)*z + (z - zbar)^3"], 2),
    (["root", "--order", "6", "--mode", "float", "exp(i*pi/2)*z + z^5"], 1),
    (["linearize", "--order", "8", "z/2 + z^2"], 0),
    (["linearize", "--order", "5", "(x1/2 + x2^2, x2/3)"], 0),
    (["linearize", "--order", "5", "(x1/2 + x2^2, x2/4)"], 1),
    (["resonance", "--max-degree", "7", "zeta(6)"], 0),
    (["resonance", "(1/2, 1/4)"], 0),
    (["matlog", "(x1/2, 3/4*x2)"], 0),
    (["matpow", "--t", "1/2", "((1/4, 0), (0, 1/2))"], 0),
    (["matpow", "--t", "1/2", "(1/4, 1/9)"], 1),
    (["matlog", "(x1/8, x2/27)"], 1),
    (["log", "z + "], 1),
    (["log", "1 + z"], 1),
    (["flow", "z/2 + zbar"], 1),
]


@pytest.mark.parametrize("argv, code", CORPUS, ids=[" ".join(a) for a, _ in CORPUS])
def test_corpus_schema_and_exit_codes(capsys, argv, code):
    got, doc, _ = call(capsys, *argv, "@json")
    assert got == code
    assert doc["command"] == argv[0]
    assert doc["status"] == {0: "ok", 1: "error", 2: "obstruction"}[code]


def test_obstruction_certificate(capsys):
    code, doc, _ = call(capsys, "root", "--order", "8", "exp(i*pi/2)*z + z^5", "@json")
    assert code == 2
    cert = doc["certificate"]
    assert cert["degree"] == 5 and cert["alpha"] == "0" and cert["beta"] == "1"
    assert "no formal iterative root" in doc["message"]


def test_branch_changes_root(capsys):
    _, a, _ = call(capsys, "root", "--order", "4", "z/4 + z^2", "@json")
    _, b, _ = call(capsys, "root", "--order", "4", "--branch", "1", "z/4 + z^2", "@json")
    assert a["series"][0][0]["coeff"] == "1/2"
    assert b["series"][0][0]["coeff"] == "-1/2"


def test_eval_half_iterate(capsys):
    _, doc, _ = call(capsys, "eval", "--order", "4", "--t", "1/2", "z/4", "@json")
    assert doc["series"] == [[{"exponents": [1], "coeff": "1/2"}]]


def test_matpow_against_mpmath(capsys):
    _, doc, _ = call(capsys, "matpow", "--t", "1/3", "(x1/2, 3/4*x2)", "@json")
    mpmath.mp.dps = 80
    got = mpmath.mpc(*map(mpmath.mpf, doc["matrix"][1][1].strip("()").split(",")))
    assert abs(got - mpmath.cbrt(mpmath.mpf(3) / 4)) < mpmath.mpf(10) ** -30


def test_resonance_witness(capsys):
    _, doc, _ = call(capsys, "resonance", "--max-degree", "7", "zeta(6)", "@json")
    assert {"s": 0, "m": [7]} in doc["witnesses"]


def test_parse_error_offset(capsys):
    code, doc, _ = call(capsys, "log", "z + $", "@json")
    assert code == 1 and doc["offset"] == 4


def test_float_warning_is_reported(capsys):
    _, doc, _ = call(capsys, "eval", "--order", "5", "--t", "1/2", "-z/2 + z^2", "@json")
    assert doc["mode"] == "float" or doc["message"]


def test_text_output(capsys):
    code, _, out = call(capsys, "log", "--order", "5", "z + z^2")
    assert code == 0 and "z^2" in out.out
    code, _, out = call(capsys, "log", "1 + z")
    assert code == 1 and "constant" in out.err


def test_bad_arguments(capsys):
    assert main(["nope", "z"]) == 1
    assert main(["eval", "z/2"]) == 1
    assert main(["log", "--order", "0", "z"]) == 1
    assert main(["root", "--k", "0", "z/4"]) == 1
    capsys.readouterr()


def test_version(capsys):
    assert main(["--version"]) == 0
    assert "germflow" in capsys.readouterr().out


def _run(args, stdin=None, env=None):
    full = dict(os.environ, **(env or {}))
    return subprocess.run(
        [sys.executable, "-m", "germflow", *args], input=stdin, capture_output=True, text=True, env=full, timeout=120
    )


def test_stdin_dash():
    p = _run(["log", "--json", "--order", "5", "-"], stdin="z + z^2\n")
    assert p.returncode == 0
    VALIDATOR.validate(json.loads(p.stdout))


def test_precision_env():
    p = _run(["matlog", "--json", "(x1/2, x2/2)"], env={"GERMFLOW_PRECISION": "100"})
    doc = json.loads(p.stdout)
    digits = doc["matrix"][0][0].strip("()").split(",")[0].lstrip("-0.")
    assert 25 <= len(digits) <= 35
    assert _run(["matlog", "(x1/2, x2/2)"], env={"GERMFLOW_PRECISION": "lots"}).returncode == 1


def test_exact_series_coefficients_are_rationals(capsys):
    _, doc, _ = call(capsys, "log", "--order", "6", "z + z^2", "@json")
    coeffs = [Fraction(t["coeff"]) for t in doc["series"][0]]
    assert coeffs[:3] == [1, -1, Fraction(3, 2)]


@pytest.mark.parametrize("m", range(1, 7))
@pytest.mark.parametrize("branch", [0, 1])
def test_certificate_exit_code_on_rotation_family(capsys, m, branch):
    germ = f"exp(i*pi/{m})*z + z^{2 * m + 1}"
    code, doc, _ = call(capsys, "root", "--order", str(2 * m + 2), "--branch", str(branch), germ, "@json")
    assert code == 2
    assert doc["certificate"]["degree"] == 2 * m + 1
