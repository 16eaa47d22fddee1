from __future__ import annotations

import json

import pytest

from udcsp.cli import DEFAULT_PIN, main
from udcsp.core import Constraint, Instance, UnaryMap, builtin
from udcsp.io import dump_instance


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


@pytest.fixture
def eq_file(tmp_path):
    inst = Instance(5, ("x", "y"), (Constraint(builtin("Eq"), (0, 1), (UnaryMap.onehot(5, 2), UnaryMap.onehot(5, 3))),))
    p = tmp_path / "eq.json"
    dump_instance(inst, str(p))
    return str(p)


@pytest.fixture
def unsat_file(tmp_path):
    m = UnaryMap.geq(4, 1)
    inst = Instance(4, ("x",), (Constraint(builtin("One"), (0,), (m,)), Constraint(builtin("Zero"), (0,), (m,))))
    p = tmp_path / "unsat.json"
    dump_instance(inst, str(p))
    return str(p)


def test_solve(capsys, eq_file, unsat_file):
    code, out, _ = run(capsys, "solve", eq_file)
    res = json.loads(out)
    assert code == 0 and res["status"] == "sat" and res["solver"] == "onehotfpt"
    assert "onehotfpt: used" in res["trace"]
    code, out, _ = run(capsys, "solve", unsat_file)
    assert code == 1 and json.loads(out)["status"] == "unsat"
    code, _, err = run(capsys, "solve", eq_file, "--algo", "minmax")
    assert code == 2 and json.loads(err)["error"] == "precondition"
    code, out, _ = run(capsys, "solve", eq_file, "--algo", "twinwidth")
    assert code == 0


def test_solve_errors(capsys, tmp_path):
    code, _, err = run(capsys, "solve", str(tmp_path / "missing.json"))
    assert code == 2 and "error" in json.loads(err)
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, "solve", str(bad))[0] == 2
    assert run(capsys, "solve")[0] == 2


def test_classify(capsys):
    code, out, _ = run(capsys, "classify", "Impl,Zero")
    assert code == 0 and json.loads(out)["families"]["monotone"]["class"] == "P"
    assert json.loads(run(capsys, "classify", "R3")[1])["families"]["monotone"]["w1_hard"]
    rep = json.loads(run(capsys, "classify", "Even4")[1])
    assert rep["families"]["onehot"]["class"] == "FPT"
    assert run(capsys, "classify", "R3", "--onehot", "yes")[0] == 2


def test_fgpp(capsys):
    code, out, _ = run(capsys, "fgpp", "--language", "R3", "--target", "perm:1,2,0")
    assert code == 0 and json.loads(out)["target_arity"] == 2
    code, out, _ = run(capsys, "fgpp", "--language", "Or2", "--target", "Eq", "--family", "id")
    assert code == 1 and json.loads(out) == "undefinable"
    code, _, _ = run(capsys, "fgpp", "--language", "RD,Impl", "--target", "diamond:4", "--family", "mo-anti")
    assert code == 0
    assert run(capsys, "fgpp", "--language", "Nope", "--target", "Eq")[0] == 2


def test_gridrank(capsys, tmp_path):
    p = tmp_path / "m.txt"
    p.write_text("1010\n0101\n1001\n0110\n")
    code, out, _ = run(capsys, "gridrank", str(p))
    assert code == 0 and json.loads(out) == 2


def test_contract(capsys, eq_file):
    code, out, _ = run(capsys, "contract", eq_file)
    seq = json.loads(out)
    assert code == 0 and seq["n"] == 5 and len(seq["merges"]) == 4
    exact = json.loads(run(capsys, "contract", eq_file, "--exact")[1])
    assert exact["width"] <= seq["width"]


def test_generate(capsys, tmp_path):
    code, out, _ = run(capsys, "generate", "sidon", "--n", "3", "--seed", "0", "--variant", "literal")
    assert code == 0 and json.loads(out)["set"] == [0, 4, 7]
    assert json.loads(run(capsys, "generate", "sidon", "--n", "12", "--seed", "0")[1])["sidon"]
    for kind in ("diamond", "halfgraph", "permutation", "even4", "mincut", "clique", "hs3", "nae"):
        code, out, _ = run(capsys, "generate", kind, "--seed", "3")
        assert code == 0, kind
        obj = json.loads(out)
        if kind in ("diamond", "halfgraph"):
            assert obj["verified"]
        else:
            p = tmp_path / f"{kind}.json"
            p.write_text(out)
            assert run(capsys, "solve", str(p), "--algo", "oracle")[0] in (0, 1)
    assert run(capsys, "generate", "sidon", "--n", "3")[0] == 2


def test_generate_is_seeded(capsys):
    a = run(capsys, "generate", "mincut", "--seed", "5")[1]
    b = run(capsys, "generate", "mincut", "--seed", "5")[1]
    assert a == b


def test_oracle_compare(capsys, eq_file):
    code, out, _ = run(capsys, "oracle-compare", "--algo", "minmax", "--seed", "1", "--count", "50")
    res = json.loads(out)
    assert code == 0 and res["agree"] and res["instances"] == 50
    code, out, _ = run(capsys, "oracle-compare", eq_file, "--algo", "onehotfpt", "--seed", "0")
    assert code == 0 and json.loads(out)["instances"] == 1


def test_corpus_run(capsys, tmp_path):
    code, out, _ = run(capsys, "corpus", "run", "--pin", DEFAULT_PIN)
    assert code == 0 and json.loads(out)["ok"]
    pin = json.load(open(DEFAULT_PIN))
    pin["ra_projection_max_grid_rank"] = 0
    p = tmp_path / "pin.json"
    p.write_text(json.dumps(pin))
    code, out, _ = run(capsys, "corpus", "run", "--pin", str(p))
    assert code == 1 and "projection grid-rank above pin" in json.loads(out)["regressions"]
