import json
from pathlib import Path

import pytest

from wkern.cli import dumps, main

DATA = Path(__file__).resolve().parents[1] / "demos" / "data"


def run(capsys, *args):
    code = main([str(a) for a in args])
    return code, capsys.readouterr().out


def test_metric_at_origin(capsys):
    code, out = run(capsys, "metric", "--domain", DATA / "disk.json", "--nodes", 128, "--point", "0,0")
    assert code == 0
    assert abs(float(out) - 1.0) < 1e-13


def test_zeros_on_annulus(capsys):
    code, out = run(capsys, "zeros", "--domain", DATA / "annulus.json", "--nodes", 256, "--base", "0.7,0")
    res = json.loads(out)
    assert code == 0 and res["ledger"] == 1


def test_output_is_deterministic(capsys, tmp_path):
    args = ["solve", "--domain", DATA / "ellipse.json", "--weight", DATA / "exptrig.json", "--base", "0.2,0.1", "--eval", DATA / "grid.json"]
    main([str(a) for a in args] + ["--out", str(tmp_path / "a.json")])
    main([str(a) for a in args] + ["--out", str(tmp_path / "b.json")])
    capsys.readouterr()
    assert (tmp_path / "a.json").read_bytes() == (tmp_path / "b.json").read_bytes()


def test_ahlfors_writes_csv_and_gnuplot(capsys, tmp_path):
    out = tmp_path / "f.json"
    code, _ = run(capsys, "ahlfors", "--domain", DATA / "annulus.json", "--nodes", 128, "--base", "0.7,0", "--out", out, "--gnuplot")
    assert code == 0
    assert out.with_suffix(".csv").read_text().startswith("curve,t,re,im")
    assert out.with_suffix(".gp").exists()


def test_verify_passes(capsys):
    code, out = run(capsys, "verify", "--domain", DATA / "disk.json", "--nodes", 128)
    assert code == 0
    assert "FAIL" not in out


@pytest.mark.parametrize(
    "args",
    [
        ["metric", "--domain", DATA / "disk.json", "--nodes", 100, "--point", "0,0"],
        ["metric", "--point", "0,0"],
        ["metric", "--domain", DATA / "disk.json", "--point", "0,0", "--tol", "bogus=1"],
        ["track", "--domain", DATA / "disk.json", "--point", "1,0"],
    ],
)
def test_schema_errors_exit_2(capsys, args):
    code, _ = run(capsys, *args)
    assert code == 2


def test_point_outside_domain_is_a_solver_error(capsys):
    code, _ = run(capsys, "eval", "--domain", DATA / "disk.json", "--base", "2,0", "--point", "0,0")
    assert code == 3


def test_dumps_format():
    txt = dumps({"b": float("nan"), "a": 1 / 3, "c": 1 + 2j})
    assert txt.index('"a"') < txt.index('"b"') < txt.index('"c"')
    assert "null" in txt and "0.33333333333333331" in txt
