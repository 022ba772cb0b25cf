import json
import subprocess
import sys

import pytest

from polygonal_mpl import io
from polygonal_mpl.cli import run
from polygonal_mpl.lab import SearchProblem, li2
from polygonal_mpl.ratfunc import RatFunc


def lines(capsys):
    return capsys.readouterr().out.strip().splitlines()


@pytest.fixture
def fiveterm(tmp_path):
    p = tmp_path / "fiveterm.json"
    assert run(["catalog", "show", "five-term", "-o", str(p)]) == 0
    return p


def test_dims(capsys):
    assert run(["dims", "--weight", "7", "--points", "8"]) == 0
    assert lines(capsys) == ["53820"]


def test_polygons(capsys):
    assert run(["polygons", "--size", "8", "--cells", "4,4,4"]) == 0
    out = lines(capsys)
    assert out[-1] == "12 dissections"
    assert len(out) == 13


def test_verify_fixture(fiveterm, capsys):
    assert run(["verify", str(fiveterm)]) == 0
    assert lines(capsys) == ["verified"]


def test_verify_refuted(tmp_path, capsys):
    p = tmp_path / "li2.json"
    p.write_text(json.dumps({"nvars": 1, "terms": [{"kind": "Li", "comp": [2], "args": ["x1"]}]}))
    assert run(["verify", str(p)]) == 1


def test_symbol_json(fiveterm, tmp_path):
    out = tmp_path / "sym.json"
    assert run(["symbol", str(fiveterm), "--json", "-o", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["type"] == "symbol" and d["residue"]["terms"] == []


def test_search_inversion(tmp_path, capsys):
    x = RatFunc.var(1, 1)
    p = tmp_path / "problem.json"
    p.write_text(io.dumps(io.problem_to_json(SearchProblem([li2(x), li2(x.inverse())], ["a", "b"]), 1)))
    out = tmp_path / "ids.json"
    assert run(["search", str(p), "--freeze", "a=2", "-o", str(out)]) == 0
    (idn,) = json.loads(out.read_text())["identities"]
    assert idn["coefficients"] == {"a": "2", "b": "2"}
    assert run(["search", str(p), "--freeze", "zz=1"]) == 2


def test_search_empty(tmp_path):
    x = RatFunc.var(1, 1)
    p = tmp_path / "problem.json"
    p.write_text(io.dumps(io.problem_to_json(SearchProblem([li2(x)]), 1)))
    assert run(["search", str(p), "-o", str(tmp_path / "out.json")]) == 1


def test_search_scale(tmp_path):
    x = RatFunc.var(1, 1)
    p = tmp_path / "problem.json"
    d = io.problem_to_json(SearchProblem([li2(x), li2(x.inverse())]), 1)
    d["max_unknowns"] = 1
    p.write_text(io.dumps(d))
    assert run(["search", str(p)]) == 3


def test_ansatz(tmp_path):
    out = tmp_path / "t.json"
    assert run(["ansatz", "--size", "4", "--weight", "2", "--comps", "2", "--symmetrize", "none", "-o", str(out)]) == 0
    assert len(io.templates_from_json(json.loads(out.read_text()))) == 4


def test_specialize(tmp_path):
    src = tmp_path / "li1.json"
    src.write_text(json.dumps({"nvars": 1, "terms": [{"kind": "Li", "comp": [1], "args": ["x1"]}]}))
    out = tmp_path / "degenerate.json"
    assert run(["specialize", str(src), "--set", "x1=1", "-o", str(out)]) == 0
    d = json.loads(out.read_text())
    assert d["regularized"]["terms"] == []
    assert d["divergent"]["letters"] == ["eps"]
    assert d["divergent"]["terms"] == [["-1", [0]]]


def test_reduce_isolation_failure(fiveterm):
    assert run(["reduce", str(fiveterm), "--step", "collapse", "x5=x4"]) == 2
    assert run(["reduce", str(fiveterm), "--plan", "nonsense"]) == 2


def test_eval_check(tmp_path, capsys):
    p = tmp_path / "stuffle.json"
    p.write_text(
        json.dumps(
            {
                "nvars": 2,
                "terms": [
                    {"coeff": "1", "product": [{"kind": "Li", "comp": [1], "args": ["x1"]}, {"kind": "Li", "comp": [1], "args": ["x2"]}]},
                    {"coeff": "-1", "kind": "Li", "comp": [1, 1], "args": ["x1", "x2"]},
                    {"coeff": "-1", "kind": "Li", "comp": [1, 1], "args": ["x2", "x1"]},
                    {"coeff": "-1", "kind": "Li", "comp": [2], "args": ["x1*x2"]},
                ],
            }
        )
    )
    assert run(["eval", str(p), "--at", "1/3,1/2", "--check"]) == 0
    assert lines(capsys)[-1] == "pass"
    assert run(["eval", str(p), "--at", "3,1/2"]) == 2


def test_catalog(capsys):
    assert run(["catalog", "list"]) == 0
    assert any(line.startswith("five-term") for line in lines(capsys))
    assert run(["catalog", "show", "missing"]) == 2


def test_normalize(capsys):
    assert run(["normalize", "--comp", "2,2"]) == 0
    assert lines(capsys)[-1] == "verified"
    assert run(["normalize", "--comp", "2,3"]) == 2


def test_usage_errors(tmp_path):
    assert run(["frobnicate"]) == 2
    assert run([]) == 2
    assert run(["verify", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    assert run(["verify", str(bad)]) == 2
    assert run(["--help"]) == 0


def test_console_entry_point():
    r = subprocess.run([sys.executable, "-m", "polygonal_mpl", "dims", "--weight", "1", "--points", "5"], capture_output=True, text=True)
    assert r.returncode == 0 and r.stdout.strip() == "5"
