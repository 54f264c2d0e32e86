import json
import os
import subprocess
import sys

import pytest

from phaselab.cli import main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def run_json(argv, capsys):
    code, out = run(argv, capsys)
    return code, json.loads(out)


@pytest.fixture
def matrix_csv(tmp_path):
    p = tmp_path / "A.csv"
    p.write_text("1,2,3\n1,-1,1\n2,1,4\n1,2,1\n2,-1,1\n")
    return str(p)


def test_measure_linear(capsys, matrix_csv):
    code, doc = run_json(["measure", "--model", "linear", "--matrix", matrix_csv, "--input", "[1,1,9]"], capsys)
    assert code == 0
    assert doc["schema"] == "phaselab/1" and doc["command"] == "measure" and doc["seed"] == 0
    assert doc["result"] == {"model": "linear", "values": [900.0, 81.0, 1521.0, 144.0, 100.0]}


def test_measure_apac_and_frog(capsys):
    code, doc = run_json(["measure", "--model", "apac", "--input", "[4.5, 9, 0.5, 1]"], capsys)
    assert code == 0 and doc["result"]["values"] == [102.5, 45.5, 11.25, 4.5]
    code, doc = run_json(["measure", "--model", "frog", "--input", "[1,2,3,4]", "--L", "2"], capsys)
    assert code == 0 and len(doc["result"]["values"]) == 4


def test_orbit_exit_codes(capsys):
    code, doc = run_json(["orbit", "--x", "[1,2,3]", "--y", "[-1,-2,-3]", "--group", "sign"], capsys)
    assert code == 0 and doc["result"]["equivalent"] is True
    code, doc = run_json(["orbit", "--x", "[1,1,9]", "--y", "[19,7,-21]", "--group", "sign"], capsys)
    assert code == 1 and doc["result"]["equivalent"] is False


def test_ambiguities(capsys):
    code, doc = run_json(["ambiguities", "--input", "[4.5, 9, 0.5, 1]"], capsys)
    assert code == 0 and doc["result"]["num_classes"] == 4


def test_diffset(capsys):
    code, doc = run_json(["diffset", "--S", "0,1,2,4", "--N", "8"], capsys)
    assert code == 0 and doc["result"]["multiset"] == [4, 2, 2, 1, 1]


def test_census_json_and_csv(capsys):
    code, doc = run_json(["census", "--N", "8", "--K", "4"], capsys)
    assert code == 0
    code, out = run(["census", "--N", "8", "--K", "4", "--format", "csv"], capsys)
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "N,K,multiset,num_sets,sets"
    assert any(line.startswith("8,4,4 2 1 2 1,") and "0 1 2 5" in line and "0 1 3 4" in line for line in lines[1:])


def test_complement(capsys, matrix_csv):
    code, doc = run_json(["complement", "--matrix", matrix_csv], capsys)
    assert code == 0
    assert doc["result"]["pass"] is False and doc["result"]["witness"] == [1, 2, 3]


def test_conjecture_single_pair_and_signal(capsys):
    code, doc = run_json(["conjecture", "--mode", "support", "--N", "8", "--S", "0,1,2,4", "--S2", "0,1,2,5"], capsys)
    assert code == 0 and doc["result"]["dim"] == 3 and doc["result"]["pass"] is True
    code, doc = run_json(["conjecture", "--mode", "signal", "--N", "8", "--S", "0,1,2,5"], capsys)
    assert code == 0 and doc["result"]["degree"] == 4


def test_conjecture_budget_exhaustion_is_failure(capsys):
    code, doc = run_json(["conjecture", "--mode", "signal", "--N", "8", "--K", "4", "--budget", "0"], capsys)
    assert code == 1 and doc["error"]["type"] == "budget"
    assert doc["result"]["complete"] is False


def test_conjecture_strict_sweep(capsys):
    code, doc = run_json(["conjecture", "--mode", "support", "--N", "7", "--K", "4", "--strict"], capsys)
    assert code == 0 and doc["result"]["strict"] is True and doc["result"]["all_pass"] is True


def test_probe_is_byte_identical(capsys, matrix_csv):
    argv = ["probe", "--matrix", matrix_csv, "--input", "[1,1,9]", "--restarts", "40", "--seed", "3"]
    code1, a = run(argv, capsys)
    code2, b = run(argv, capsys)
    assert code1 == code2 == 0 and a == b
    assert json.loads(a)["seed"] == 3


def test_probe_random_input(capsys):
    code, doc = run_json(["probe", "--model", "gabor", "--N", "3", "--restarts", "3"], capsys)
    assert code == 0 and doc["result"]["report"]["restarts"] == 3


def test_selftest_fast(capsys):
    code, doc = run_json(["selftest", "--fast"], capsys)
    assert code == 0 and doc["result"]["pass"] is True


def test_usage_errors(capsys, tmp_path):
    code, doc = run_json(["bogus"], capsys)
    assert code == 2 and doc["error"]["type"] == "usage"
    code, doc = run_json(["measure", "--model", "pac", "--input", str(tmp_path / "missing.json")], capsys)
    assert code == 2
    code, doc = run_json(["diffset", "--S", "0,1,x", "--N", "8"], capsys)
    assert code == 2
    code, doc = run_json([], capsys)
    assert code == 2


def test_computation_error_exits_one(capsys):
    # a window longer than N is rejected by the model, not by the parser
    code, doc = run_json(["measure", "--model", "stft", "--input", "[1,2]", "--window", "[1,1,1]", "--L", "1"], capsys)
    assert code == 1 and doc["error"]["type"] == "ValueError"


def test_out_writes_file_only_when_asked(capsys, tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    run(["diffset", "--S", "0,1,2,4", "--N", "8"], capsys)
    assert os.listdir(tmp_path) == []
    target = tmp_path / "doc.json"
    code, out = run(["diffset", "--S", "0,1,2,4", "--N", "8", "--out", str(target)], capsys)
    assert code == 0 and target.read_text() == out


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "phaselab", "diffset", "--S", "0,1,3,4", "--N", "8"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["result"]["multiset"] == [4, 2, 1, 2, 1]
