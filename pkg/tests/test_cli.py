import csv
import io
import json
import logging
import subprocess
import sys

import numpy as np
import pytest

from nbodystab import cli
from nbodystab.cli import SCAN_COLUMNS, ScanSpec, UsageError, main, parse_family, run_scan, rows_to_csv


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_config(tmp_path, obj, name="cfg.json"):
    p = tmp_path / name
    p.write_text(obj if isinstance(obj, str) else json.dumps(obj))
    return str(p)


class TestCheckCommand:
    def test_passes(self, capsys):
        code, out, _ = run(capsys, "check-paper")
        assert code == 0
        lines = out.strip().splitlines()
        assert all(line.startswith("PASS") for line in lines)
        assert any("5184" in line for line in lines)
        assert any("36/11" in line and "True" in line for line in lines)

    def test_json(self, capsys):
        code, out, _ = run(capsys, "check-paper", "--format", "json")
        assert code == 0
        names = {r["name"] for r in json.loads(out)}
        assert {"A-matrix (1,2,3)", "trace identity", "det identity", "threshold equivalence"} <= names

    def test_failure_named(self, capsys, monkeypatch):
        monkeypatch.setattr(cli, "lagrange_hessian_closed_form", lambda m: np.ones((6, 6)))
        code, out, err = run(capsys, "check-paper")
        assert code == 1
        assert "FAIL  A-matrix (1,2,3)" in out
        assert "A-matrix" in err


class TestScan:
    def test_below_threshold_all_hyperbolic(self, capsys):
        code, out, _ = run(capsys, "scan", "--mu", "3.0,3.2,3.37", "--e", "0,0.2,0.5,0.8", "--jobs", "1")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert list(rows[0].keys()) == SCAN_COLUMNS
        assert len(rows) == 12
        assert [(r["mu"], r["e"]) for r in rows][:5] == [("3.0", "0.0"), ("3.0", "0.2"), ("3.0", "0.5"),
                                                         ("3.0", "0.8"), ("3.2", "0.0")]
        assert all(r["class"] == "hyperbolic" for r in rows)
        assert all(float(r["detAD"]) > 0 for r in rows)

    def test_gascheau_examples(self, capsys):
        code, out, _ = run(capsys, "scan", "--mu", "30,20", "--e", "0", "--jobs", "2")
        rows = list(csv.DictReader(io.StringIO(out)))
        assert rows[0]["class"] == "elliptic"
        assert rows[1]["class"] != "elliptic"
        assert float(rows[0]["detAD"]) < 0

    def test_deterministic_across_jobs(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        assert run(capsys, "scan", "--mu", "3.1,25", "--e", "0,0.4", "--jobs", "1", "--out", str(a))[0] == 0
        assert run(capsys, "scan", "--mu", "3.1,25", "--e", "0,0.4", "--jobs", "3", "--out", str(b))[0] == 0
        assert a.read_bytes() == b.read_bytes()

    def test_float_round_trip(self):
        rows = run_scan(ScanSpec(e_values=(0.3,), masses=((1.0, 2.0, 3.0),)))
        text = rows_to_csv(rows)
        rec = next(csv.DictReader(io.StringIO(text)))
        assert float(rec["detAD"]) == rows[0].det_AD
        assert float(rec["mult_re_1"]) == rows[0].multipliers[0].real
        assert rows[0].det_AD_sign == 1

    def test_explicit_masses_and_json(self, capsys):
        code, out, _ = run(capsys, "scan", "--masses", "1,2,3", "--masses", "1,1,1", "--e", "0.1", "--format", "json")
        data = json.loads(out)
        assert code == 0 and len(data) == 2
        assert data[0]["mu"] == pytest.approx(36 / 11)
        assert data[1]["detAD"] == pytest.approx(5184)

    @pytest.mark.parametrize("argv", [
        ["scan", "--mu", "3.1", "--e", "1.0"],
        ["scan", "--mu", "2.5"],
        ["scan", "--mu", "3.1", "--masses", "1,2,3"],
        ["scan"],
        ["scan", "--mu", "3.1", "--kappa", "2"],
        ["scan", "--mu", "abc"],
        ["scan", "--masses", "1,2"],
        ["scan", "--mu", "3.1", "--jobs", "0"],
        ["scan", "--mu", "3.1", "--format", "xml"],
        ["check-paper", "--kappa", "2"],
        ["threshold", "--kappa", "2"],
        ["bogus"],
    ])
    def test_usage_errors(self, capsys, argv):
        assert run(capsys, *argv)[0] == 2

    def test_unwritable_path(self, capsys, tmp_path):
        code, _, err = run(capsys, "scan", "--mu", "3.1", "--out", str(tmp_path / "missing" / "x.csv"))
        assert code == 1 and "Error" in err


class TestAnalyze:
    def test_equilateral_orbit(self, capsys, tmp_path):
        path = write_config(tmp_path, {"masses": [1, 1, 1], "named": "equilateral", "orbit": {"e": 0.5}})
        code, out, _ = run(capsys, "analyze", path)
        rep = json.loads(out)
        assert code == 0
        assert rep["strongly_nondegenerate"] is True and rep["strong_minimizer"] is True
        assert rep["gascheau_mu"] == 3.0
        assert rep["orbit"]["blocks"]["D"]["classification"] == "hyperbolic"
        assert rep["orbit"]["verdict"] == "linearly unstable"

    def test_collinear(self, capsys, tmp_path):
        code, out, _ = run(capsys, "analyze", write_config(tmp_path, {"masses": [1, 1, 1], "named": "collinear"}))
        rep = json.loads(out)
        assert code == 0
        assert rep["central_residual"] <= 1e-12
        assert rep["lambda"] == pytest.approx(-1.25, rel=1e-14)
        assert "orbit" not in rep

    def test_collinear_refined(self, capsys, tmp_path):
        code, out, _ = run(capsys, "analyze", write_config(tmp_path, {"masses": [1, 2, 3], "named": "collinear"}))
        assert code == 0 and json.loads(out)["central_residual"] <= 1e-12

    def test_round_trip(self, capsys, tmp_path):
        path = write_config(tmp_path, {"masses": [1, 2, 3], "named": "equilateral"})
        rep = json.loads(run(capsys, "analyze", path)[1])
        again = write_config(tmp_path, {"masses": [1, 2, 3], "positions": rep["positions"]}, "again.json")
        rep2 = json.loads(run(capsys, "analyze", again)[1])
        for key in ("lambda", "potential", "moment_of_inertia"):
            assert rep2[key] == pytest.approx(rep[key], rel=1e-12)
        assert abs(rep2["central_residual"] - rep["central_residual"]) <= 1e-12
        for block in ("Delta", "K", "D"):
            np.testing.assert_allclose(rep2["spectra"][block], rep["spectra"][block], rtol=1e-12, atol=1e-12)
        assert rep2["strongly_nondegenerate"] == rep["strongly_nondegenerate"]

    def test_non_central(self, capsys, tmp_path):
        path = write_config(tmp_path, {"masses": [1, 2, 3], "named": "isosceles", "height": 1.2})
        code, out, _ = run(capsys, "analyze", path)
        rep = json.loads(out)
        assert code == 0 and rep["central_residual"] > 1e-3
        assert rep["strongly_nondegenerate"] is None and rep["strong_minimizer"] is None

    def test_non_central_orbit_fails(self, capsys, tmp_path):
        path = write_config(tmp_path, {"masses": [1, 2, 3], "positions": [[0, 0], [2, 0], [1, 0.3]], "orbit": {}})
        assert run(capsys, "analyze", path)[0] == 1

    def test_collision(self, capsys, tmp_path):
        path = write_config(tmp_path, {"masses": [1, 1, 1], "positions": [[0, 0], [0, 0], [1, 0]]})
        code, _, err = run(capsys, "analyze", path)
        assert code == 1 and "Collision" in err

    def test_kappa_flag(self, capsys, tmp_path):
        path = write_config(tmp_path, {"masses": [1, 1, 1], "named": "equilateral"})
        rep = json.loads(run(capsys, "analyze", path, "--kappa", "2")[1])
        assert rep["kappa"] == 2.0
        assert rep["lambda"] == pytest.approx(-2 * rep["potential"] / rep["moment_of_inertia"])

    @pytest.mark.parametrize("cfg,needle", [
        ({"named": "collinear"}, "'masses'"),
        ({"masses": [1, 1, 1]}, "positions"),
        ({"masses": [1, -1, 1], "named": "collinear"}, "'masses'"),
        ({"masses": [1, 1], "named": "equilateral"}, "'named'"),
        ({"masses": [1, 1, 1], "named": "square"}, "'named'"),
        ({"masses": [1, 1, 1], "positions": [[0, 0], [1, 0]]}, "'positions'"),
        ({"masses": [1, 1, 1], "named": "equilateral", "orbit": {"e": 1.5}}, "orbit.e"),
        ({"masses": [1, 1, 1], "named": "equilateral", "kappa": "one"}, "'kappa'"),
        ('{"masses": [1, 1, 1],\n "named": }', "line 2"),
    ])
    def test_parse_errors(self, capsys, tmp_path, cfg, needle):
        code, _, err = run(capsys, "analyze", write_config(tmp_path, cfg))
        assert code == 2
        assert needle in err

    def test_missing_file(self, capsys, tmp_path):
        assert run(capsys, "analyze", str(tmp_path / "nope.json"))[0] == 2


class TestThreshold:
    @pytest.mark.parametrize("family", ["1,m,m", "1,m,2m"])
    def test_families(self, capsys, family):
        code, out, _ = run(capsys, "threshold", "--family", family, "--format", "json")
        rep = json.loads(out)
        assert code == 0
        assert rep["width"] <= 1e-9
        assert abs(rep["mu"] - 27 / 8) <= 1e-8
        lo, hi = sorted(rep["mu_bracket"])
        assert lo <= 27 / 8 <= hi

    def test_text_output(self, capsys):
        code, out, _ = run(capsys, "threshold")
        assert code == 0 and out.startswith("family 1,m,m: mu* = 3.37")

    def test_not_found(self, capsys):
        code, _, err = run(capsys, "threshold", "--family", "1,m,m", "--lo", "0.5", "--hi", "1")
        assert code == 1 and "NotFound" in err

    @pytest.mark.parametrize("family", ["1,m", "1,m,x", "1,m,__import__('os')", "1,m,m+"])
    def test_bad_family(self, capsys, family):
        assert run(capsys, "threshold", "--family", family)[0] == 2

    def test_parse_family(self):
        f = parse_family("1, 2m, 0.5*m + 1")
        assert f(2.0) == (1.0, 4.0, 2.0)
        with pytest.raises(UsageError):
            parse_family("m,m")


class TestPlumbing:
    def test_log_level_from_env(self, capsys, monkeypatch):
        monkeypatch.setenv("NBODY_LOG", "DEBUG")
        run(capsys, "threshold")
        assert logging.getLogger("nbodystab").level == logging.DEBUG
        monkeypatch.setenv("NBODY_LOG", "nonsense")
        run(capsys, "threshold")
        assert logging.getLogger("nbodystab").level == logging.WARNING

    def test_module_entry_point(self):
        proc = subprocess.run([sys.executable, "-m", "nbodystab.cli", "threshold"], capture_output=True, text=True)
        assert proc.returncode == 0 and "mu*" in proc.stdout
        proc = subprocess.run([sys.executable, "-m", "nbodystab.cli"], capture_output=True, text=True)
        assert proc.returncode == 2
