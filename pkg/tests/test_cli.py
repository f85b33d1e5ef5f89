import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from angularcp.cli import main

DATA = Path(__file__).parent / "data"


def run(argv, capsysbinary):
    code = main(argv)
    out, err = capsysbinary.readouterr()
    return code, out, err.decode()


def write(tmp_path, text):
    p = tmp_path / "in.csv"
    p.write_text(text)
    return str(p)


def test_segment_matches_golden(capsysbinary):
    code, out, _ = run(["segment", str(DATA / "synthetic_wind_wave.csv"), "--time-col", "time"], capsysbinary)
    assert code == 0
    assert out == (DATA / "synthetic_wind_wave.golden.json").read_bytes()


def test_detect_json_and_csv(capsysbinary):
    path = str(DATA / "synthetic_wind_wave.csv")
    code, out, _ = run(["detect", path, "--time-col", "time"], capsysbinary)
    doc = json.loads(out)
    assert code == 0 and doc["reject"] is True and 1 <= doc["khat"] < 360
    code, out, _ = run(["detect", path, "--time-col", "time", "--out", "csv"], capsysbinary)
    assert out.decode().splitlines()[0] == "k,q,u"


def test_sphere_latlon(tmp_path, capsysbinary):
    rng = np.random.default_rng(0)
    lat = np.r_[rng.normal(20, 3, 60), rng.normal(-10, 3, 60)]
    lon = rng.normal(70, 3, 120)
    path = write(tmp_path, "lat,lon\n" + "".join(f"{a:.3f},{b:.3f}\n" for a, b in zip(lat, lon)))
    code, out, _ = run(["detect", path, "--surface", "sphere", "--latlon"], capsysbinary)
    assert code == 0
    assert json.loads(out)["surface"] == "sphere"


def test_usage_errors_exit_1(capsysbinary):
    assert run(["nope"], capsysbinary)[0] == 1
    assert run(["segment"], capsysbinary)[0] == 1
    path = str(DATA / "synthetic_wind_wave.csv")
    assert run(["segment", path, "--ratio", "2.0"], capsysbinary)[0] == 1
    assert run(["segment", path, "--min-seg", "2"], capsysbinary)[0] == 1
    assert run(["simulate-null", "--reps", "5"], capsysbinary)[0] == 1


def test_data_errors_exit_2(tmp_path, capsysbinary):
    code, _, err = run(["detect", str(tmp_path / "missing.csv")], capsysbinary)
    assert code == 2 and "data error" in err
    code, _, err = run(["detect", write(tmp_path, "a,b\n1,2\nbad,3\n")], capsysbinary)
    assert code == 2 and "line 3" in err
    code, _, err = run(["detect", write(tmp_path, "")], capsysbinary)
    assert code == 2 and "found 0" in err


def test_degenerate_exit_3(tmp_path, capsysbinary):
    path = write(tmp_path, "a,b\n" + "10,20\n" * 30)
    code, _, err = run(["detect", path], capsysbinary)
    assert code == 3 and "singular" in err


def test_simulate_null_and_power(capsysbinary):
    code, out, _ = run(["simulate-null", "--n", "60", "--reps", "100", "--seed", "3"], capsysbinary)
    doc = json.loads(out)
    assert code == 0 and len(doc["statistics"]) == 100
    code, out, _ = run(
        ["simulate-power", "--n", "60", "--reps", "100", "--dphi=-pi/2,0,pi/2", "--dtheta", "0:pi/2:2", "--out", "csv"],
        capsysbinary,
    )
    rows = out.decode().splitlines()
    assert code == 0 and len(rows) == 3 and rows[0].startswith("dtheta\\dphi,")


def test_sample_reproducible(capsysbinary):
    argv = ["sample", "--model", "fisher", "--n", "20", "--seed", "9", "--out", "csv"]
    _, a, _ = run(argv, capsysbinary)
    _, b, _ = run(argv, capsysbinary)
    assert a == b and len(a.decode().splitlines()) == 21


def test_sample_feeds_detect(tmp_path, capsysbinary):
    _, out, _ = run(["sample", "--n", "200", "--units", "deg", "--out", "csv", "--kappa3", "1"], capsysbinary)
    path = tmp_path / "s.csv"
    path.write_bytes(out)
    code, out, _ = run(["detect", str(path)], capsysbinary)
    assert code == 0


@pytest.mark.parametrize("argv", [["--help"], ["segment", "--help"]])
def test_help(argv, capsysbinary):
    code, out, _ = run(argv, capsysbinary)
    assert code == 0 and b"usage" in out


def test_module_entry_point():
    res = subprocess.run(
        [sys.executable, "-m", "angularcp", "segment", str(DATA / "synthetic_wind_wave.csv"), "--time-col", "time"],
        capture_output=True,
    )
    assert res.returncode == 0
    assert res.stdout == (DATA / "synthetic_wind_wave.golden.json").read_bytes()
