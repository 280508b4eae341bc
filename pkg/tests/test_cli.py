import json
import subprocess
import sys
from pathlib import Path

import pytest

from rungepairs.cli import main

SAMPLES = Path(__file__).resolve().parent.parent / "samples"


def s(name):
    return str(SAMPLES / f"{name}.json")


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_topology(capsys, tmp_path):
    code, out, _ = run(capsys, "topology", s("annulus"), "--out-dir", str(tmp_path))
    data = json.loads(out)
    assert code == 0 and data["bounded"] == 1 and data["intervals"] == 2
    assert (tmp_path / "topology.svg").read_text().startswith("<?xml")
    code, out, _ = run(capsys, "topology", s("plane_minus_axis"))
    data = json.loads(out)
    assert data["bounded"] == 0 and data["intervals"] == 0


def test_parse_error_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"type": "disc",\n  "radius": ,}')
    code, _, err = run(capsys, "topology", str(bad))
    assert code == 2 and "line 2" in err
    code, _, _ = run(capsys, "betti", str(tmp_path / "missing.json"))
    assert code == 2


@pytest.mark.parametrize("name,triple", [("punctured_plane", [0, 0, 1]), ("plane_minus_axis", [0, 1, 0]),
                                         ("annulus", [0, 0, 1])])
def test_betti(capsys, name, triple):
    code, out, _ = run(capsys, "betti", s(name))
    d = json.loads(out)
    assert code == 0 and [d["b1"], d["b2"], d["b3"]] == triple
    assert {"b1_D", "r", "k"} <= set(d["inputs"])


def test_runge_exit_codes(capsys):
    code, out, _ = run(capsys, "runge", s("annulus"), s("shifted_puncture"))
    assert code == 0
    code, out, _ = run(capsys, "runge", s("punctured_plane"), s("plane"))
    assert code == 1 and "h3" in json.loads(out)["witnesses"]["iv"]
    code, _, _ = run(capsys, "runge", s("annulus"), s("annulus"))
    assert code == 0
    code, _, _ = run(capsys, "runge", s("plane"), s("punctured_plane"))
    assert code == 3


def test_approx(capsys, tmp_path):
    code, out, _ = run(capsys, "approx", s("annulus"), s("shifted_puncture"), "--stem", s("reciprocal"),
                       "--K", s("ring_K"), "--eps", "1e-6", "--out-dir", str(tmp_path))
    d = json.loads(out)
    assert code == 0 and d["result"]["achieved"] <= 1e-6
    rows = (tmp_path / "error_curve.csv").read_text().splitlines()
    assert rows[0] == "eps,total_degree,sup_error" and len(rows) == 7
    assert (tmp_path / "error_curve.svg").exists() and (tmp_path / "routes.svg").exists()


def test_approx_polynomial(capsys):
    code, out, _ = run(capsys, "approx", s("annulus"), s("shifted_puncture"), "--stem", s("quadratic"),
                       "--K", s("ring_K"))
    assert code == 0 and json.loads(out)["result"]["achieved"] == 0


def test_approx_stem(capsys):
    code, out, _ = run(capsys, "approx", s("annulus"), s("shifted_puncture"), "--stem", s("reciprocal_stem"),
                       "--K", s("ring_K"), "--eps", "1e-5")
    d = json.loads(out)["result"]
    assert code == 0 and d["achieved_quaternionic"] <= 2 ** 0.5 * 1e-5


def test_approx_not_runge(capsys):
    code, out, _ = run(capsys, "approx", s("punctured_plane"), s("plane"), "--stem", s("reciprocal"),
                       "--K", s("ring_K"), "--contour", "circle:0,0,1")
    d = json.loads(out)
    assert code == 4 and d["obstruction_max"] >= 0.99
    assert d["witnesses"]["v"]["points"] == [[0.0, 0.0]]


def test_verify_and_determinism(capsys, tmp_path):
    args = ["verify", "--count", "6", "--roundtrip", "3", "--norm-samples", "400"]
    code, _, err = run(capsys, *args, "--out-dir", str(tmp_path / "a"))
    assert code == 0 and "equivalence: pass" in err
    run(capsys, *args, "--out-dir", str(tmp_path / "b"), "--jobs", "2")
    for name in ("verify.json", "records.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    code, _, _ = run(capsys, *args, "--inject-bug")
    assert code == 1
    code, _, err = run(capsys, "verify", "--count", "0", "--norm-samples", "0")
    assert code == 0 and "vacuous" in err


def test_svg_is_byte_stable(capsys, tmp_path):
    for d in ("x", "y"):
        run(capsys, "runge", s("annulus"), s("shifted_puncture"), "--out-dir", str(tmp_path / d))
    for name in ("pair.svg", "atlas_D.svg", "runge.json"):
        assert (tmp_path / "x" / name).read_bytes() == (tmp_path / "y" / name).read_bytes()


def test_entry_point_module():
    proc = subprocess.run([sys.executable, "-m", "rungepairs.cli", "betti", s("punctured_plane"),
                           "--resolution", "65"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["b3"] == 1
