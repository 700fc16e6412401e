import io
import json
import shutil
import subprocess
import sys

import pytest

from lieformal import FIXTURES
from lieformal.cli import cli_run, load_structure, UsageError


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_run(list(argv), out, err)
    return code, out.getvalue(), err.getvalue()


def test_schouten_square_so3():
    code, out, _ = run("schouten-square", "so3")
    assert code == 0
    assert out.splitlines() == ["0", "POISSON"]


def test_schouten_square_non_poisson():
    code, out, _ = run("schouten-square", "non-poisson")
    assert code == 1
    assert out.splitlines() == ["-2*x3 @1^@2^@3", "NOT-POISSON"]


def test_bracket_of_coordinate_differentials():
    assert run("bracket", "r2-symplectic.json", "dx1", "dx2") == (0, "0\n", "")


def test_bracket_and_tilde_pi_on_so3():
    assert run("bracket", "so3", "dx1", "dx2")[1] == "1 dx3\n"
    assert run("tilde-pi", "so3", "dx1", "dx2")[1] == "x3\n"
    # {f, b} = pi(df, b) for a function f
    assert run("bracket", "so3", "x1", "dx2")[1] == "x3\n"
    assert run("bracket", "so3", "x1", "x2")[1] == "0\n"


def test_fixture_file_path():
    path = str(FIXTURES / "so3.json")
    assert run("schouten-square", path)[0] == 0
    S = load_structure(path)
    assert S.dim == 3 and S.is_poisson


def test_verify_main_theorem():
    code, out, _ = run("verify", "main-theorem", "so3", "--trials", "10",
                       "--max-word-length", "3", "--seed", "1")
    assert code == 0
    assert out == "PASS main-theorem seed=1 trials=10 max-word-length=3 max-poly-degree=2\n"


def test_verify_main_theorem_non_poisson():
    code, out, _ = run("verify", "main-theorem", "non-poisson", "--trials", "10",
                       "--max-word-length", "3", "--seed", "1")
    assert code == 1
    lines = out.splitlines()
    assert lines[0].startswith("FAIL main-theorem seed=1")
    assert lines[1] == ("counterexample: main theorem (skewed) defect on "
                        "-3 s(1 dx1) ^ s(1 dx2) ^ s(1 dx3): 3 s(x3)")


def test_json_report():
    code, out, _ = run("verify", "jacobi", "non-poisson", "--trials", "5", "--format", "json")
    assert code == 1
    rep = json.loads(out)
    assert set(rep) == {"check", "seed", "trials", "pass", "counterexample"}
    assert rep["check"] == "jacobi" and rep["pass"] is False and rep["seed"] == 0
    code, out, _ = run("verify", "jacobi", "so3", "--trials", "5", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"check": "jacobi", "seed": 0, "trials": 5, "pass": True}


def test_json_expression_output():
    code, out, _ = run("tilde-pi", "so3", "dx1", "dx2", "--format", "json")
    assert code == 0
    assert json.loads(out) == {"command": "tilde-pi", "result": "x3"}


@pytest.mark.parametrize("argv", [
    ("verify", "jacobi", "so3", "--trials", "0"),
    ("verify", "jacobi", "so3", "--max-word-length", "5"),
    ("verify", "jacobi", "so3", "--max-word-length", "0"),
    ("verify", "jacobi", "so3", "--seed", "-1"),
    ("verify", "jacobi", "so3", "--seed", str(2 ** 64)),
    ("verify", "jacobi", "so3", "--max-poly-degree", "-1"),
    ("verify", "jacobi", "so3", "--bogus"),
    ("verify", "no-such-check", "so3"),
    ("verify", "jacobi", "so3", "--format", "xml"),
    ("bracket", "so3", "dx1 +", "dx2"),
    ("bracket", "so3", "dx7", "dx2"),
    ("bracket", "so3", "dx1"),
    ("bracket", "/nonexistent/file.json", "dx1", "dx2"),
    ("frobnicate",),
    (),
])
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == 2
    assert out == "" and err


def test_malformed_structure_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    assert run("schouten-square", str(p))[0] == 2
    p.write_text(json.dumps({"dim": 2, "bivector": "@1^@3"}))
    assert run("schouten-square", str(p))[0] == 2


def test_load_structure_unknown():
    with pytest.raises(UsageError):
        load_structure("missing-fixture")


@pytest.mark.parametrize("check", ["coalgebra", "homotopy", "nikonov"])
def test_byte_reproducible(check):
    argv = ("verify", check, "quadratic", "--trials", "4", "--seed", "12345", "--format", "json")
    assert run(*argv) == run(*argv)


def test_failure_report_reproducible():
    argv = ("verify", "linfty", "non-poisson", "--trials", "6", "--seed", "7")
    first = run(*argv)
    assert first[0] == 1
    assert first == run(*argv)


def test_console_script():
    exe = shutil.which("lieformal")
    cmd = [exe] if exe else [sys.executable, "-m", "lieformal.cli"]
    proc = subprocess.run(cmd + ["schouten-square", "so3"], capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout == "0\nPOISSON\n"
    proc = subprocess.run(cmd + ["verify", "jacobi"], capture_output=True, text=True)
    assert proc.returncode == 2 and proc.stderr
