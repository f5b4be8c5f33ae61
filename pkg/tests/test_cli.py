"""End-to-end tests of the command line interface."""

import json

import numpy as np
import pytest

from curv.cli import main
from curv.fields import Paraboloid, sample_to_grid


def run_json(capsys, argv):
    rc = main(argv)
    out = capsys.readouterr().out
    return rc, json.loads(out)


class TestPoint:
    def test_flat_paraboloid(self, capsys):
        rc, doc = run_json(capsys, ["point", "--field", "paraboloid", "--at", "1,0"])
        assert rc == 0
        assert doc["meta"]["tool"] == "curv"
        row = doc["results"][0]
        assert row["mean_curvature"] == pytest.approx(3.0 / (2.0 * np.sqrt(2.0)))
        assert row["w"] == pytest.approx(np.sqrt(2.0))

    def test_spherical_hemisphere_is_minimal(self, capsys):
        rc, doc = run_json(
            capsys,
            ["point", "--field", "hemisphere:1", "--ambient", "spherical", "--at", "0.3,0.2"],
        )
        assert rc == 0
        row = doc["results"][0]
        assert abs(row["mean_curvature"]) <= 1e-10
        assert row["route_residual"] <= 1e-8
        assert row["scalar_curvature"] == pytest.approx(2.0, abs=1e-10)

    def test_constant_ambient(self, capsys):
        rc, doc = run_json(
            capsys,
            ["point", "--field", "paraboloid", "--ambient", "constant:2.0", "--at", "1,0"],
        )
        assert rc == 0
        row = doc["results"][0]
        assert row["mean_curvature"] == pytest.approx(2.0 * 3.0 / (2.0 * np.sqrt(2.0)))

    def test_grid_field(self, capsys, tmp_path):
        grid = sample_to_grid(
            Paraboloid(2), origin=np.array([-1.5, -1.5]), h=0.05, counts=(61, 61)
        )
        path = tmp_path / "parab.csv"
        grid.write(path)
        rc, doc = run_json(capsys, ["point", "--field", f"grid:{path}", "--at", "1,0"])
        assert rc == 0
        row = doc["results"][0]
        assert row["mean_curvature"] == pytest.approx(3.0 / (2.0 * np.sqrt(2.0)), abs=1e-8)


class TestSlice:
    def test_paraboloid_level(self, capsys):
        rc, doc = run_json(
            capsys, ["slice", "--field", "paraboloid", "--eps", "0.5", "--rays", "6"]
        )
        assert rc == 0
        rows = doc["results"]
        assert len(rows) > 1
        summary = rows[-1]
        assert summary["worst_minor_residual"] <= 1e-8
        assert summary["passed"]

    def test_csv_format(self, capsys):
        rc = main(
            ["slice", "--field", "paraboloid", "--eps", "0.5", "--rays", "4", "--format", "csv"]
        )
        out = capsys.readouterr().out
        assert rc == 0
        lines = out.strip().splitlines()
        assert "," in lines[0]
        assert len(lines) >= 2


class TestVerify:
    def test_identity(self, capsys):
        rc, doc = run_json(
            capsys, ["verify", "identity", "--n", "3-5", "--trials", "2000"]
        )
        assert rc == 0
        assert doc["results"][0]["max_rel_residual"] <= 1e-12

    def test_identity_tolerance_floor(self, capsys):
        rc = main(["verify", "identity", "--trials", "100", "--tol", "1e-15"])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_minor(self, capsys):
        rc, doc = run_json(
            capsys, ["verify", "minor", "--fields", "3", "--points", "4"]
        )
        assert rc == 0
        assert doc["results"][0]["worst_analytic_residual"] <= 1e-8

    def test_minor_fd(self, capsys):
        rc, doc = run_json(
            capsys, ["verify", "minor", "--fields", "2", "--points", "2", "--fd"]
        )
        assert rc == 0
        row = doc["results"][0]
        assert row["worst_fd_residual"] <= 1e-4
        assert row["median_fd_slope"] > 1.7

    def test_inequality(self, capsys):
        rc, doc = run_json(
            capsys,
            ["verify", "inequality", "--which", "prod", "--fields", "3", "--rays", "5"],
        )
        assert rc == 0
        assert doc["results"][0]["violations"] == 0


class TestBarrier:
    def test_profile_slide(self, capsys):
        rc, doc = run_json(capsys, ["barrier", "--field", "radial:S-u:0.5"])
        assert rc == 0
        row = doc["results"][0]
        assert row["lam_star"] > 0.0
        assert row["outcome"] == "touch"

    def test_no_touch_exits_one(self, capsys):
        rc, doc = run_json(capsys, ["barrier", "--field", "constant:-1"])
        assert rc == 1
        assert doc["results"][0]["outcome"] == "no-touch"

    def test_negate_flag(self, capsys):
        rc, doc = run_json(capsys, ["barrier", "--field", "constant:-1", "--negate"])
        assert rc == 0
        assert doc["results"][0]["outcome"] == "touch"
        assert doc["results"][0]["boundary_touch"]


class TestExamples:
    def test_euclid_cone(self, capsys):
        rc, doc = run_json(capsys, ["example", "--name", "euclid-cone"])
        assert rc == 0
        checks = doc["results"][-1]
        assert checks["passed"]

    def test_spherical_glued(self, capsys):
        rc, doc = run_json(capsys, ["example", "--name", "spherical-glued"])
        assert rc == 0
        checks = doc["results"][-1]
        assert checks["passed"]

    def test_spherical_glued_csv(self, capsys):
        rc = main(["example", "--name", "spherical-glued", "--format", "csv"])
        out = capsys.readouterr().out
        assert rc == 0
        lines = out.strip().splitlines()
        header = lines[0].split(",")
        assert "scalar" in header
        first = lines[1].split(",")
        # the outer branch starts at the waist, where the scalar floor is met
        assert float(first[1]) == pytest.approx(0.5)
        assert float(first[-1]) == pytest.approx(2.0)


class TestDeterminism:
    def test_byte_identical_reports(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        argv = ["verify", "inequality", "--which", "euclid", "--fields", "2", "--rays", "4", "--seed", "7"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_csv_reports_identical(self, tmp_path, capsys):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        argv = ["example", "--name", "spherical-glued", "--format", "csv"]
        assert main(argv + ["--out", str(a)]) == 0
        assert main(argv + ["--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() == b.read_bytes()

    def test_seed_changes_report(self, tmp_path, capsys):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        base = ["verify", "inequality", "--which", "euclid", "--fields", "2", "--rays", "4"]
        assert main(base + ["--seed", "1", "--out", str(a)]) == 0
        assert main(base + ["--seed", "2", "--out", str(b)]) == 0
        capsys.readouterr()
        assert a.read_bytes() != b.read_bytes()


class TestConfig:
    def test_config_file_supplies_defaults(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("trials = 500\nseed = 9\n")
        rc, doc = run_json(
            capsys, ["verify", "identity", "--n", "3", "--config", str(cfg)]
        )
        assert rc == 0
        assert doc["meta"]["seed"] == 9
        assert doc["results"][0]["trials"] == 500

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("trials = 500\n")
        rc, doc = run_json(
            capsys,
            ["verify", "identity", "--n", "3", "--trials", "800", "--config", str(cfg)],
        )
        assert rc == 0
        assert doc["results"][0]["trials"] == 800


class TestErrors:
    def test_unknown_field_spec(self, capsys):
        rc = main(["point", "--field", "banana", "--at", "0,0"])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_unknown_subcommand(self):
        with pytest.raises(SystemExit) as err:
            main(["frobnicate"])
        assert err.value.code == 2

    def test_out_of_domain_point(self, capsys):
        rc = main(["point", "--field", "hemisphere:1", "--at", "2,0"])
        assert rc == 2

    def test_missing_grid_file(self, capsys):
        rc = main(["point", "--field", "grid:/nonexistent/g.csv", "--at", "0,0"])
        assert rc == 2

    def test_write_out_file(self, tmp_path, capsys):
        out = tmp_path / "point.json"
        rc = main(["point", "--field", "paraboloid", "--at", "1,0", "--out", str(out)])
        assert rc == 0
        assert "wrote" in capsys.readouterr().out
        assert json.loads(out.read_text())["meta"]["tool"] == "curv"
