import json
import subprocess
import sys

import pytest

from triwaring import UTMatrix
from triwaring.cli import main


def run(*args):
    proc = subprocess.run(
        [sys.executable, "-m", "triwaring", *args], capture_output=True, text=True, timeout=300
    )
    return proc.returncode, proc.stdout, proc.stderr


@pytest.fixture
def target_file(tmp_path):
    def write(matrix, name="target.json"):
        path = tmp_path / name
        path.write_text(json.dumps(matrix.to_json()))
        return str(path)

    return write


def test_order():
    code, out, _ = run("order", "--poly", "[x1,x2]^2")
    assert code == 0
    assert json.loads(out) == {"order": 2, "certificate": [1, 1], "checkedUpTo": 2}
    code, out, _ = run("order", "--poly", "x1")
    assert code == 0 and json.loads(out)["order"] == 0


def test_order_errors():
    assert run("order", "--poly", "x1+1")[0] == 2
    assert run("order", "--poly", "x1 x2")[0] == 2
    assert run("order", "--poly", "[x1,x2]^3", "--order-cap", "2")[0] == 3


def test_witness_corner_path(target_file, tmp_path):
    out = tmp_path / "bundle.json"
    path = target_file(UTMatrix.unit(4, 2, 4))
    code, _, _ = run("witness", "--poly", "[x1,x2]^2", "--n", "4", "--target", path, "--out", str(out))
    assert code == 0
    data = json.loads(out.read_text())
    assert data["mode"] == "single" and data["verified"] is True
    assert run("verify", str(out))[0] == 0


def test_witness_inapplicable(target_file):
    path = target_file(UTMatrix(5, {(1, 3): 1, (3, 5): 1}))
    code, out, _ = run("witness", "--poly", "[x1,x2]^2", "--n", "5", "--target", path)
    assert code == 4
    reason = json.loads(out)
    assert reason["error"] == "inapplicable" and reason["suggestion"] == "decompose"


def test_witness_to_stdout(target_file):
    path = target_file(UTMatrix(5, {(1, 3): 1, (2, 4): -2, (3, 5): 3}))
    code, out, _ = run("witness", "--poly", "[x1,x2]^2", "--target", path)
    assert code == 0
    assert json.loads(out)["verified"] is True


def test_band_violation(target_file):
    path = target_file(UTMatrix(5, {(1, 2): 1, (1, 3): 1, (2, 4): 1, (3, 5): 1}))
    assert run("witness", "--poly", "[x1,x2]^2", "--n", "5", "--target", path)[0] == 5
    assert run("decompose", "--poly", "[x1,x2]^2", "--n", "5", "--target", path)[0] == 5


def test_malformed_inputs(target_file, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"n": 3, "entries": [{"row": 1, "col": 3, "value": "0.5"}]}')
    assert run("witness", "--poly", "[x1,x2]^2", "--target", str(bad))[0] == 2
    bad.write_text("not json")
    assert run("decompose", "--poly", "[x1,x2]^2", "--target", str(bad))[0] == 2
    assert run("witness", "--poly", "[x1,x2]^2", "--target", str(tmp_path / "missing.json"))[0] == 2
    path = target_file(UTMatrix.zero(5))
    assert run("witness", "--poly", "[x1,x2]^2", "--n", "6", "--target", path)[0] == 2


def test_decompose_round_trip_and_determinism(target_file, tmp_path):
    path = target_file(UTMatrix(5, {(1, 3): 1, (3, 5): 1}))
    outs = [tmp_path / "a.json", tmp_path / "b.json"]
    for out in outs:
        code, _, _ = run("decompose", "--poly", "[x1,x2]^2", "--n", "5", "--target", path, "--out", str(out), "--seed", "7")
        assert code == 0
    assert outs[0].read_bytes() == outs[1].read_bytes()
    code, out, _ = run("verify", str(outs[0]))
    assert code == 0 and "verified" in out


def test_decompose_zero_and_small_n(target_file):
    assert run("decompose", "--poly", "[x1,x2]^2", "--target", target_file(UTMatrix.zero(5)))[0] == 0
    assert run("decompose", "--poly", "[x1,x2]^2", "--target", target_file(UTMatrix.zero(3), "t3.json"))[0] == 4


def test_verify_corrupted(target_file, tmp_path):
    path = target_file(UTMatrix(5, {(1, 3): 1, (3, 5): 1}))
    out = tmp_path / "bundle.json"
    assert run("decompose", "--poly", "[x1,x2]^2", "--target", path, "--out", str(out))[0] == 0
    data = json.loads(out.read_text())
    data["target"]["entries"].append({"row": 1, "col": 5, "value": "99"})
    out.write_text(json.dumps(data))
    code, text, _ = run("verify", str(out))
    assert code == 1
    assert "(1,5)" in text


def test_verify_missing_and_malformed(tmp_path):
    assert run("verify", str(tmp_path / "nope.json"))[0] == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"poly": "x1+1", "n": 2, "mode": "single", "tuples": [], "target": {"n": 2, "entries": []}}')
    assert run("verify", str(bad))[0] == 2


def test_usage_error():
    assert main(["order"], quiet=True) == 2
    assert main(["frobnicate"], quiet=True) == 2


def test_selftest_smoke(capsys):
    assert main(["selftest", "--trials", "2"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert sum(line.startswith("[PASS]") for line in lines) == 9
