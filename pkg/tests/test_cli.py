import json
import pathlib

import numpy as np
import pytest

from mumford_diffusion.cli import EXIT_INPUT, EXIT_OK, EXIT_TOLERANCE, main, render_json
from mumford_diffusion.padic import FieldParams
from mumford_diffusion.schwartz import LatticeWindow, TestFunction

DATA = pathlib.Path(__file__).resolve().parents[1] / "data" / "graphs"


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize("name, decision", [("dumbbell", "Contained"), ("rose", "Contained"),
                                            ("theta", "NotContained"), ("theta_loops", "Contained")])
def test_classify(capsys, name, decision):
    code, out, _ = run(capsys, "classify", DATA / f"{name}.json")
    assert code == EXIT_OK
    assert json.loads(out)["decision"] == decision


def test_classify_all_trees_csv(capsys):
    code, out, _ = run(capsys, "classify", DATA / "theta_loops.json", "--all-trees", "--csv")
    assert code == EXIT_OK
    assert out.splitlines()[0] == "decision,tree" and len(out.splitlines()) == 4


def test_enumerate(capsys, tmp_path):
    target = tmp_path / "g2.json"
    code, out, _ = run(capsys, "enumerate", "--genus", 2, "--out", target)
    assert code == EXIT_OK and out == ""
    doc = json.loads(target.read_text())
    assert doc["count"] == 3


def test_outputs_are_byte_identical(capsys):
    first = run(capsys, "family", "--prime", 5, "--points", 4)[1]
    second = run(capsys, "family", "--prime", 5, "--points", 4)[1]
    assert first == second
    rows = json.loads(first)["rows"]
    assert [r["epsilon"] for r in rows] == [0, 5, 10, 15]


def test_family_explicit_epsilons(capsys):
    code, out, _ = run(capsys, "family", "--prime", 13, "--epsilon", "0,13", "--s", 26)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["s"] == 26 and len(doc["rows"]) == 2


def test_spectrum(capsys):
    code, out, _ = run(capsys, "spectrum", DATA / "dumbbell.json", "--prime", 3)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["lattice_decision"] == "Contained" and doc["N"] == 3


def test_search(capsys):
    code, out, _ = run(capsys, "search", DATA / "theta.json", "--prime", 3, "--precision", 24)
    doc = json.loads(out)
    assert code == EXIT_OK and doc["result"] in ("Found", "NotFound") and doc["explored_tuples"] == 16


def _psi(tmp_path):
    path = tmp_path / "psi.json"
    phi = TestFunction.random(FieldParams(3), LatticeWindow(1, 1, 2), np.random.default_rng(0))
    path.write_text(phi.to_json())
    return path


def test_evolve(capsys, tmp_path):
    code, out, _ = run(capsys, "evolve", "--psi", _psi(tmp_path), "--times", "0,0.5,1", "--group", "shell_swap",
                       "--prime", 3)
    doc = json.loads(out)
    assert code == EXIT_OK and len(doc["rows"]) == 3 and doc["mass_drift"] < 1e-12
    assert doc["rows"][1]["residual"] is not None


def test_evolve_tolerance_breach(capsys, tmp_path):
    code, out, err = run(capsys, "evolve", "--psi", _psi(tmp_path), "--times", "0,1,2,3", "--prime", 3,
                         "--tol", 0)
    drift = json.loads(out)["mass_drift"]
    assert code == (EXIT_TOLERANCE if drift > 0 else EXIT_OK)
    assert ("drift" in err) == (drift > 0)


@pytest.mark.parametrize("argv", [["classify", "missing.json"], ["enumerate", "--genus", "1"],
                                  ["family", "--prime", "4"], ["family", "--lambda", "1000"],
                                  ["evolve", "--psi", "missing.json", "--times", "0"],
                                  ["spectrum", str(DATA / "dumbbell.json"), "--gamma", "1"]])
def test_input_errors(capsys, argv):
    assert run(capsys, *argv)[0] == EXIT_INPUT


def test_bad_graph_json(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"vertices": [0], "edges": [[0, 5]]}')
    assert run(capsys, "classify", bad)[0] == EXIT_INPUT


def test_render_json_is_stable():
    doc = {"b": 0.1 + 0.2, "a": [1, complex(1, 2)], "c": {3, 1}}
    assert render_json(doc) == render_json(dict(reversed(list(doc.items()))))
    assert json.loads(render_json(doc))["b"] == 0.3
