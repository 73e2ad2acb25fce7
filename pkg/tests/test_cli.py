import io
import json
import re
from pathlib import Path

import pytest

from gentle.algebra import build_gentle_algebra
from gentle.cli import emit_dot, main
from gentle.complexes import complex_to_json
from gentle.datum import dual_numbers, two_parallel_chains
from gentle.exactla import QQ
from gentle.fixtures import expected_square_band

DATA = Path(__file__).resolve().parent.parent / "demos" / "data"


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main([str(a) for a in argv], out, err)
    return code, out.getvalue(), err.getvalue()


def run_json(*argv):
    code, out, err = run(*argv)
    return code, json.loads(out)


@pytest.fixture(autouse=True)
def no_env_field(monkeypatch):
    monkeypatch.delenv("GENTLE_FIELD", raising=False)


def test_datum_validate():
    code, obj = run_json("datum", "validate", DATA / "dual.json")
    assert code == 0
    assert obj == {"valid": True, "gentle": True, "seed": 0}


def test_word_build_reproduces_band_complex():
    code, obj = run_json("word", "build", DATA / "pair33.json", DATA / "square_band.json")
    assert code == 0
    A = build_gentle_algebra(two_parallel_chains(), QQ)
    want = json.loads(json.dumps(complex_to_json(expected_square_band(A, 1, 2))))
    assert obj.pop("seed") == 0
    assert obj == want


def test_round_trip_through_complex_commands(tmp_path):
    code, obj = run_json("word", "build", DATA / "pair33.json", DATA / "hook_string.json")
    obj.pop("seed")
    path = tmp_path / "hook.json"
    path.write_text(json.dumps(obj))
    code, chk = run_json("complex", "check", DATA / "pair33.json", path)
    assert code == 0 and chk["is_complex"] and chk["is_minimal"]
    code, dec = run_json("complex", "decompose", DATA / "pair33.json", path)
    assert len(dec["summands"]) == 1 and dec["summands"][0] == obj
    code, iso = run_json("complex", "iso", DATA / "pair33.json", path, path)
    assert iso["homotopy_isomorphic"] is True


def test_cohomology_of_dual_x3():
    code, obj = run_json("complex", "cohomology", DATA / "dual.json", DATA / "dual_x3.json")
    assert code == 0
    assert {k: sum(v.values()) for k, v in obj.items() if k != "seed"} == {"-2": 1, "-1": 0, "0": 1}


def test_word_check_and_equiv():
    code, obj = run_json("word", "check", DATA / "pair33.json", DATA / "hook_string.json")
    assert obj["valid"] and obj["kind"] == "string"
    code, obj = run_json("word", "equiv", DATA / "pair33.json", DATA / "square_band.json", DATA / "square_band.json")
    assert obj["word_equivalent"] and obj["homotopy_isomorphic"]


def test_word_enumerate_negative_window():
    code, obj = run_json("word", "enumerate", DATA / "dual.json", "--window", "-2:0", "--bands")
    assert code == 0 and obj["strings"] and obj["bands"] == []


def test_sets_and_cycles():
    code, obj = run_json("datum", "sets", DATA / "skew33.json")
    assert obj["counts"] == {"omega": 6, "omega_bar": 8, "omega_tilde": 6, "omega_hat": 4}
    code, obj = run_json("datum", "cycles", DATA / "dual.json")
    assert obj["special_cycles"] == [[[1, 1]]] and obj["agree"] and not obj["resolutions_terminate"]


def test_dot_outputs():
    code, out, _ = run("algebra", "info", DATA / "dual.json", "--dot")
    assert out.startswith("// seed: 0\ndigraph")
    # one vertex with one loop
    assert out.count("->") == 1 and "(1,2,1)" in out
    code, out, _ = run("word", "build", DATA / "pair33.json", DATA / "square_band.json", "--dot")
    nodes = re.findall(r"^\s+n\d+ \[label", out, re.M)
    solid = re.findall(r"-> n\d+ \[label", out)
    dotted = re.findall(r"style=dotted", out)
    assert (len(nodes), len(solid), len(dotted)) == (8, 4, 4)
    assert emit_dot([]) == "digraph gluing {\n}\n"


def test_bunch_show():
    code, obj = run_json("bunch", "show", DATA / "dual.json", "--window", "-1:0")
    assert len(obj["sigma"]) == 4
    code, out, _ = run("bunch", "show", DATA / "dual.json", "--format", "text")
    assert out.startswith("indices: 4") and out.rstrip().endswith("seed: 0")


def test_rouquier_commands():
    code, obj = run_json("rouquier", "certify", DATA / "dual.json", DATA / "dual_x3.json")
    assert code == 0 and obj["ok"] and len(obj["generator"]["members"]) == 3
    code, obj = run_json("rouquier", "fatpoint", "2")
    assert obj["ok"] and obj["dim_A"] == 3
    code, obj = run_json("rouquier", "fatpoint", "0")
    assert code == 1 and obj["type"] == "ValueError"


def test_field_precedence(monkeypatch):
    monkeypatch.setenv("GENTLE_FIELD", "Fp:4")
    code, obj = run_json("datum", "validate", DATA / "dual.json")
    assert code == 1 and obj["type"] == "FieldError"
    code, obj = run_json("datum", "validate", DATA / "dual.json", "--field", "Q")
    assert code == 0
    code, obj = run_json("--field", "Fp:7", "algebra", "info", DATA / "pair33.json")
    assert code == 0 and obj["dim_A"] == 9


def test_seed_recorded_and_deterministic():
    a = run("word", "equiv", DATA / "pair33.json", DATA / "square_band.json", DATA / "square_band.json",
            "--seed", "17")
    b = run("word", "equiv", DATA / "pair33.json", DATA / "square_band.json", DATA / "square_band.json",
            "--seed", "17")
    assert a == b
    assert json.loads(a[1])["seed"] == 17
    code, obj = run_json("--seed", "5", "datum", "validate", DATA / "dual.json")
    assert obj["seed"] == 5


def test_domain_errors_exit_1(tmp_path):
    code, obj = run_json("datum", "validate", tmp_path / "missing.json")
    assert code == 1 and obj["seed"] == 0 and "error" in obj
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"m": [1]}))
    code, obj = run_json("datum", "validate", bad)
    assert code == 1 and obj["type"] == "DatumError"
    word = tmp_path / "w.json"
    word.write_text(json.dumps({"segments": [{"i": 1, "a": 4, "b": 1, "r": 0, "orient": "high-first"}]}))
    code, obj = run_json("word", "check", DATA / "pair33.json", word)
    assert code == 1 and obj["type"] == "WordError"


@pytest.mark.parametrize("argv", [
    [],
    ["datum", "frob", "x.json"],
    ["word", "build", "d.json"],
    ["word", "enumerate", "d.json", "--window", "3"],
    ["complex", "iso", "d.json", "one.json"],
    ["suite", "run", "--corpus", "huge"],
])
def test_usage_errors_exit_2(argv, tmp_path):
    d = tmp_path / "d.json"
    d.write_text(json.dumps(dual_numbers().to_json()))
    one = tmp_path / "one.json"
    one.write_text(json.dumps({"degrees": {}}))
    argv = [str(d) if a == "d.json" else str(one) if a == "one.json" else a for a in argv]
    code, out, err = run(*argv)
    assert code == 2 and out == "" and "usage error" in err


def test_suite_run_small_subset():
    code, out, _ = run("suite", "run", "--corpus", "small", "--only", "1,4,11", "--format", "text")
    assert code == 0
    lines = out.strip().splitlines()
    assert [l[:6] for l in lines[:3]] == ["[PASS]"] * 3
    assert lines[-2] == "3/3 passed" and lines[-1] == "seed: 0"
    code, obj = run_json("suite", "run", "--only", "1")
    assert obj["passed"] and obj["corpus"] == "small"


def test_text_format_for_plain_results():
    code, out, _ = run("algebra", "info", DATA / "pair33.json", "--format", "text")
    lines = out.strip().splitlines()
    assert "dim_A: 9" in lines and "gentle: true" in lines and lines[-1] == "seed: 0"
