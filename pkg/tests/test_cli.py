import io
import json
import os
import subprocess
import sys
from fractions import Fraction as F
from pathlib import Path

import pytest

from oss import knuth_yao
from oss.cli import main, render_table
from oss.solver import SolveReport

SYSTEMS = Path(__file__).resolve().parent.parent / "systems"
KY = str(SYSTEMS / "knuth-yao.oss")


def run(*argv):
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


@pytest.fixture
def write(tmp_path):
    def _write(text, name="sys.oss"):
        p = tmp_path / name
        p.write_text(text)
        return str(p)

    return _write


def test_solve_knuth_yao_table():
    code, text = run("solve", KY)
    assert code == 0
    lines = text.splitlines()
    assert lines[0].split() == ["state", *knuth_yao.FACES]
    rows = {ln.split()[0]: ln.split()[1:] for ln in lines[2:8]}
    for x, expected in knuth_yao.EXPECTED.items():
        assert [F(v) for v in rows[x]] == list(expected)
    assert "method: eliminate" in text


def test_solve_kleene_decimals():
    code, text = run("solve", "--method", "kleene", "--tol", "1e-9", KY)
    assert code == 0
    assert "iterations: 30" in text and "tol: 1e-09" in text
    row = next(ln for ln in text.splitlines() if ln.startswith("x3"))
    vals = [float(v) for v in row.split()[1:]]
    for got, want in zip(vals, knuth_yao.EXPECTED["x3"]):
        assert abs(got - float(want)) <= 1e-9


def test_solve_json_roundtrip():
    code, text = run("solve", "--format", "json", KY)
    assert code == 0
    doc = json.loads(text)
    assert set(doc) >= {"method", "converged", "iterations", "solution", "residual_ok", "probability_preserved"}
    assert doc["solution"]["x3"]["d5"] == "1/3"
    rep = SolveReport.from_json(doc)
    assert rep.solution == knuth_yao.expected_solution()
    assert rep.to_json() == doc


def test_solve_tropical_eliminate_is_input_error(capsys):
    code, _ = run("solve", "--method", "eliminate", str(SYSTEMS / "shortest.oss"))
    assert code == 1
    assert "CapabilityMissing" in capsys.readouterr().err


def test_solve_non_convergence_exit_2():
    code, text = run("solve", "--method", "kleene", "--tol", "1e-9", "--max-iter", "3", KY)
    assert code == 2
    assert "converged: no" in text


def test_solve_errors_exit_1(write, capsys):
    assert run("solve", "/no/such/file.oss")[0] == 1
    bad = write("semiring rational\noutputs { d1 }\nstates { x1 }\nx1 = 1/2*x1 + 2/3*d1\n")
    assert run("solve", bad)[0] == 1
    assert "x1" in capsys.readouterr().err
    assert run("solve", "--method", "kleene", KY)[0] == 1  # tolerance required


def test_usage_errors_exit_1():
    with pytest.raises(SystemExit) as exc:
        main(["solve"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["solve", "--tol", "abc", KY])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_solve_empty_states(write):
    code, text = run("solve", write("semiring rational\noutputs { d }\nstates { }\n"))
    assert code == 0


def test_compare_examples(write):
    b = write("semiring bool2\noutputs { d0 d1 ; d0 < d1 }\nstates { }\n", "b.oss")
    code, text = run("compare", b, "d1", "d0 + d1")
    assert code == 0 and text.strip() == "equivalent"
    q = write("semiring rational\noutputs { d0 d1 ; d0 < d1 }\n", "q.oss")
    assert run("compare", q, "1/2*d0 + 1/2*d1", "d1")[1].splitlines()[0] == "left-below"
    d = write("semiring rational\noutputs { d0 d1 }\n", "d.oss")
    code, text = run("compare", "--format", "json", d, "1/2*d0", "1/2*d1")
    doc = json.loads(text)
    assert doc["relation"] == "incomparable"
    assert doc["witnesses"] == {"left_not_below_right": ["d0"], "right_not_below_left": ["d1"]}


def test_compare_parse_error(write, capsys):
    q = write("semiring rational\noutputs { d0 d1 }\n")
    assert run("compare", q, "1/2*d7", "d1")[0] == 1
    assert "UndeclaredIdentifier" in capsys.readouterr().err


def test_check_axioms_subset():
    code, text = run("check-axioms", "bool2", "natural", "--samples", "100")
    assert code == 0
    lines = text.splitlines()
    assert any(ln.split()[:2] == ["antisymmetry", "bool2"] and ln.split()[-1] == "ok" for ln in lines)
    assert not any(ln.endswith("FAIL") for ln in lines)


def test_check_axioms_json():
    code, text = run("check-axioms", "rational", "--samples", "100", "--format", "json")
    assert code == 0
    doc = json.loads(text)
    mutant = [d for d in doc if d["law"] == "fact3-under-mutant-bind"]
    assert mutant and mutant[0]["passed"] is False and mutant[0]["status"] == "ok"
    assert all(d["status"] in ("ok", "info") for d in doc)


def test_search_cli():
    code, text = run("search-counterexample", "--max-size", "2")
    assert code == 0
    assert "exhausted: no violation" in text and "bool2" in text
    code, text = run("search-counterexample", "--max-size", "3", "--format", "json")
    doc = json.loads(text)
    assert doc["exhausted_without_violation"] is True
    assert run("search-counterexample", "--max-size", "5")[0] == 1


def test_demo():
    code, text = run("demo", "knuth-yao")
    assert code == 0
    assert "exact table match: yes" in text and "methods agree: yes" in text
    assert "row masses: x1=1, x2=1, x3=1, x4=1, x5=1, x6=1" in text
    code, text = run("demo", "knuth-yao", "--format", "json")
    doc = json.loads(text)
    assert doc["matches_table"] and doc["methods_agree"]
    assert doc["eliminate"]["solution"]["x3"]["d5"] == "1/3"


def test_no_color_when_disabled(monkeypatch):
    class Tty(io.StringIO):
        def isatty(self):
            return True

    monkeypatch.setenv("OSS_COLOR", "1")
    assert "\x1b[" in render_table(["a"], [[1]], Tty())
    monkeypatch.setenv("OSS_COLOR", "0")
    assert "\x1b[" not in render_table(["a"], [[1]], Tty())


def test_module_entry_point():
    env = dict(os.environ, OSS_COLOR="0")
    proc = subprocess.run([sys.executable, "-m", "oss", "demo", "knuth-yao"], capture_output=True, text=True, env=env)
    assert proc.returncode == 0, proc.stderr
    proc = subprocess.run([sys.executable, "-m", "oss", "solve", "--bogus"], capture_output=True, text=True, env=env)
    assert proc.returncode == 1
