import csv
import io
import json
import subprocess
import sys

import pytest

from linspec.cli import main, selftest_checks


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def run_json(capsys, *argv):
    code, out, err = run(capsys, *argv)
    assert code == 0, err
    return json.loads(out)


def test_dim(capsys):
    doc = run_json(capsys, "dim", "--n", "4", "--d", "10", "--m", "6^7")
    assert (doc["vdim"], doc["ldim"], doc["lexpdim"], doc["b"]) == (119, 140, 140, 2)


def test_dim_csv(capsys):
    code, out, _ = run(capsys, "--csv", "dim", "--n", "3", "--d", "4", "--m", "2^9")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1
    assert rows[0]["ldim"] == "-1" and json.loads(rows[0]["mults"]) == [2] * 9
    code, out2, _ = run(capsys, "dim", "--csv", "--n", "3", "--d", "4", "--m", "2^9")
    assert out2 == out


def test_baselocus_and_transform(capsys):
    doc = run_json(capsys, "baselocus", "--n", "4", "--d", "10", "--m", "6^7")
    assert {"I": [1, 2], "k": 2} in doc["entries"] and "conditions" in doc
    doc = run_json(capsys, "transform", "--n", "2", "--d", "1", "--m", "2,2,2")
    assert doc["r"] == 1 and doc["class"]
    raw = run_json(capsys, "transform", "--n", "2", "--d", "1", "--m", "2,2,2", "--no-expand")
    assert raw["text"] != doc["text"]


def test_cohomology(capsys):
    doc = run_json(capsys, "cohomology", "--n", "2", "--d", "1", "--m", "2,2,2")
    assert doc["recursion_ok"] and doc["levels"][-1]["h"] == [0, 0, 3] and doc["chi_tilde"] == 3
    doc = run_json(capsys, "cohomology", "--n", "3", "--d", "4", "--m", "2^9")
    assert not doc["guaranteed"] and "recursion_ok" not in doc
    assert doc["levels"][0]["h"][0] == {"const": -1, "h_tilde": {"1": 1, "2": -1, "3": 1}}


def test_cremona(capsys):
    doc = run_json(capsys, "cremona", "--n", "2", "--d", "2", "--m", "1^3", "--base", "1,2,3")
    assert (doc["d"], doc["mults"], doc["c"], doc["b"], doc["valid"]) == (1, [0, 0, 0], -1, -2, True)
    doc = run_json(capsys, "cremona", "--n", "2", "--d", "2", "--m", "1^3,0^2", "--reduce")
    assert doc["final"]["d"] == 1 and len(doc["moves"]) == 1


def test_oracle(capsys, tmp_path):
    doc = run_json(capsys, "oracle", "--n", "3", "--d", "4", "--m", "2^9", "--seed", "5")
    assert doc["h0"] == 1 and doc["seed"] == 5
    doc = run_json(capsys, "oracle", "--n", "4", "--d", "10", "--m", "6^7", "--containment", "1,2", "--draws", "1")
    assert doc["multiplicity"] == 2
    pts = tmp_path / "pts.json"
    pts.write_text(json.dumps([[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    doc = run_json(capsys, "oracle", "--n", "2", "--d", "2", "--m", "1^3", "--points", str(pts))
    assert doc["h0"] == 3


def test_star(capsys):
    doc = run_json(capsys, "star", "--n", "2", "--d", "2", "--m", "2,1,1,1")
    assert doc["formula"] == doc["parent"] == doc["oracle"] == 3 and doc["only_pair_terms"]
    doc = run_json(capsys, "star", "--n", "2", "--d", "2", "--m", "2,1,2,1", "--no-oracle")
    assert doc["formula"] == -1 and doc["parent"] == 1 and "oracle" not in doc


@pytest.mark.parametrize("argv", [
    ["dim", "--n", "2", "--d", "2", "--m", "1^x"],
    ["dim", "--n", "2", "--d", "-1"],
    ["star", "--n", "2", "--d", "2", "--m", "1,1,1"],
    ["cremona", "--n", "2", "--d", "2", "--m", "1^3", "--base", "1,a"],
    ["cremona", "--n", "2", "--d", "2", "--m", "1^3", "--base", "1,2"],
])
def test_usage_errors(capsys, argv):
    code, out, err = run(capsys, *argv)
    assert code == 2 and not out
    assert json.loads(err)["error"] == "usage"


def test_argparse_errors_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["dim", "--n", "2"])
    assert exc.value.code == 2


def test_cap_exit(capsys, monkeypatch):
    code, _, err = run(capsys, "--cap", "100", "oracle", "--n", "3", "--d", "10", "--m", "3^10")
    assert code == 3 and json.loads(err)["error"] == "cap"
    monkeypatch.setenv("LINSPEC_CAP", "10")
    code, _, _ = run(capsys, "oracle", "--n", "2", "--d", "5", "--m", "2^3")
    assert code == 3
    code, _, _ = run(capsys, "cremona", "--n", "2", "--d", "20", "--m", "9^3,8^3", "--reduce", "--max-steps", "1")
    assert code == 3


SCAN = ["scan", "--n", "2:3", "--d", "1:4", "--s", "2:7", "--count", "24", "--trials", "2", "--seed", "9"]


def test_scan_width_determinism(capsys, tmp_path):
    a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
    da = run_json(capsys, *SCAN, "--out", str(a))
    db = run_json(capsys, *SCAN, "--width", "2", "--out", str(b))
    assert da == db and da["specs"] == 24 and not da["mismatches"]
    assert a.read_bytes() == b.read_bytes()
    for line in a.read_text().splitlines():
        assert not json.loads(line)["guaranteed"]


def test_scan_resume(capsys, tmp_path):
    full, part = tmp_path / "full.jsonl", tmp_path / "part.jsonl"
    want = run_json(capsys, *SCAN, "--out", str(full))
    short = [x if x != "24" else "10" for x in SCAN]
    run_json(capsys, *short, "--out", str(part))
    got = run_json(capsys, *SCAN, "--out", str(part), "--resume")
    assert got == want
    assert part.read_bytes() == full.read_bytes()
    assert json.loads((tmp_path / "part.jsonl.cursor").read_text())["next"] == 24


def test_scan_guaranteed_only(capsys):
    doc = run_json(capsys, "scan", "--n", "2:3", "--d", "1:4", "--s", "2:7", "--count", "15",
                   "--regime", "guaranteed", "--trials", "2")
    assert doc["guaranteed"] == doc["matches"] == 15 and doc["findings"] == 0


def test_selftest(capsys):
    doc = run_json(capsys, "selftest")
    assert doc["ok"] and all(c["ok"] for c in doc["checks"])
    assert all(flag for _, flag in selftest_checks())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "linspec", "dim", "--n", "2", "--d", "3"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["ldim"] == 10
