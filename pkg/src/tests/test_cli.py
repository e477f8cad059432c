"""
End-to-end tests of the command line through main().
"""
import json
import logging

import numpy as np
import pytest

from application.use_cases import iso_checks
from domain.entities import Grid, VectorField
from infrastructure.adapters import FieldFileAdapter
from main import main


@pytest.fixture(autouse=True)
def restore_logging():
    """main() reconfigures the root logger; put it back afterwards."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    root.handlers[:] = handlers
    root.setLevel(level)


@pytest.fixture
def force_file(tmp_path):
    path = tmp_path / "force.txt"
    FieldFileAdapter().save(str(path), VectorField.from_interior(Grid(nx=2), [1.0]))
    return path


def _without_elapsed(text: str) -> dict:
    report = json.loads(text)
    report["metadata"].pop("elapsed")
    return report


class TestCheckIsoCommand:
    """Tests for `check-iso`."""

    def test_passes(self, capsys):
        """A small run exits 0 and prints the report."""
        code = main(["check-iso", "--seed", "42", "--dims", "4x6", "--trials", "2"])
        assert code == 0
        report = json.loads(capsys.readouterr().out)
        assert report["passed"] is True
        assert report["metadata"]["seed"] == 42
        assert all(record["pass"] for record in report["records"])

    def test_one_by_one(self):
        """dims 1x1 passes."""
        assert main(["check-iso", "--dims", "1x1", "--trials", "3", "--single-thread"]) == 0

    @pytest.mark.parametrize("flags", [
        ["--trials", "0"],
        ["--dims", "4by6"],
        ["--tol", "-1"],
        ["--seed", "-3"],
    ])
    def test_usage_errors(self, flags, capsys):
        """Bad configuration exits 2."""
        assert main(["check-iso", *flags]) == 2
        assert "error" in capsys.readouterr().err

    def test_failed_check_exits_one(self, monkeypatch, capsys):
        """A violated identity exits 1 and names the check."""
        monkeypatch.setattr(iso_checks, "NORM_IDENTITY_RTOL", -1.0)
        assert main(["check-iso", "--dims", "3x3", "--trials", "1"]) == 1
        report = json.loads(capsys.readouterr().out)
        failed = {r["name"] for r in report["records"] if not r["pass"]}
        assert failed == {"iso_tilde_norm", "coset_map_norm"}

    def test_report_file(self, tmp_path, capsys):
        """--report writes the file and prints a one-line summary."""
        path = tmp_path / "report.json"
        assert main(["check-iso", "--dims", "3x4", "--trials", "1", "--report", str(path)]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary == {"command": "check-iso", "failed": [], "passed": True, "report": str(path)}
        assert json.loads(path.read_text())["passed"] is True

    def test_unwritable_report(self, tmp_path):
        """A report path in a missing directory exits 2."""
        path = tmp_path / "nowhere" / "report.json"
        assert main(["check-iso", "--dims", "3x4", "--trials", "1", "--report", str(path)]) == 2

    def test_deterministic(self, tmp_path):
        """Same seed and flags give identical reports apart from timing."""
        first, second = tmp_path / "a.json", tmp_path / "b.json"
        flags = ["check-iso", "--seed", "42", "--dims", "5x7,3x2", "--trials", "3"]
        assert main([*flags, "--report", str(first)]) == 0
        assert main([*flags, "--single-thread", "--report", str(second)]) == 0
        assert _without_elapsed(first.read_text()) == _without_elapsed(second.read_text())


class TestPressureCommand:
    """Tests for `pressure`."""

    def test_two_cell_file(self, force_file, tmp_path, capsys):
        """The hand example writes (0.25, -0.25)."""
        output = tmp_path / "p.txt"
        assert main(["pressure", "--input", str(force_file), "--output", str(output), "--grid", "2"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["success"] is True
        assert summary["solver"] == "dense"
        assert summary["continuityConstant"] == pytest.approx(1.0 / (2.0 * np.sqrt(2.0)))
        assert summary["residual"] == pytest.approx(0.0, abs=1e-14)
        np.testing.assert_allclose(FieldFileAdapter().load(str(output)).flat(), [0.25, -0.25], atol=1e-14)

    def test_zero_field(self, tmp_path):
        """Zero force in, zero pressure out."""
        source, output = tmp_path / "zero.txt", tmp_path / "p.txt"
        FieldFileAdapter().save(str(source), VectorField.zeros(Grid(nx=3, ny=2)))
        assert main(["pressure", "--input", str(source), "--output", str(output)]) == 0
        np.testing.assert_array_equal(FieldFileAdapter().load(str(output)).flat(), np.zeros(6))

    def test_malformed_file(self, tmp_path, capsys):
        """A parse error exits 2 and reports the line."""
        source = tmp_path / "bad.txt"
        source.write_text('{"grid": {"nx": 2}, "kind": "vector"}\nu\n0\nx\n0\n')
        assert main(["pressure", "--input", str(source), "--output", str(tmp_path / "p.txt")]) == 2
        assert "line 4" in capsys.readouterr().err

    def test_grid_mismatch(self, force_file, tmp_path):
        """--grid must match the file header."""
        code = main(["pressure", "--input", str(force_file), "--output", str(tmp_path / "p.txt"), "--grid", "3"])
        assert code == 2

    def test_missing_input(self, tmp_path):
        """An unreadable input exits 2."""
        code = main(["pressure", "--input", str(tmp_path / "none.txt"), "--output", str(tmp_path / "p.txt")])
        assert code == 2

    def test_cg_solver(self, force_file, tmp_path, capsys):
        """--solver cg reports no continuity constant."""
        output = tmp_path / "p.txt"
        assert main(["pressure", "--input", str(force_file), "--output", str(output), "--solver", "cg"]) == 0
        summary = json.loads(capsys.readouterr().out)
        assert summary["solver"] == "cg"
        assert summary["continuityConstant"] is None
        assert summary["relativeResidual"] <= 1e-10
        assert summary["errorBound"] <= 1e-8
        np.testing.assert_allclose(FieldFileAdapter().load(str(output)).flat(), [0.25, -0.25], atol=1e-12)


class TestMmsCommand:
    """Tests for `mms`."""

    def test_cos_x(self, capsys):
        """cosX on 8, 16, 32 passes with order about two."""
        assert main(["mms", "--case", "cosX", "--n", "8,16,32"]) == 0
        report = json.loads(capsys.readouterr().out)
        assert report["mms"]["case"] == "cosX"
        assert [row["n"] for row in report["mms"]["rows"]] == [8, 16, 32]
        assert all(abs(order - 2.0) < 0.1 for order in report["mms"]["orders"])

    @pytest.mark.parametrize("n_list", ["8,4", "2,4", "", "8,x"])
    def test_bad_mesh_list(self, n_list):
        """Invalid mesh lists exit 2."""
        assert main(["mms", "--n", n_list]) == 2

    def test_unknown_case(self):
        """Unknown cases are rejected by the parser."""
        assert main(["mms", "--case", "sinX"]) == 2


class TestGlobalFlags:
    """Tests for global options."""

    def test_missing_config(self, tmp_path, capsys):
        """A settings file that does not exist exits 2."""
        assert main(["--config", str(tmp_path / "none.env"), "check-iso"]) == 2
        assert "settings file not found" in capsys.readouterr().err

    def test_config_changes_defaults(self, tmp_path, capsys):
        """RIESZ_DEFAULT_TOL sets the --tol default."""
        settings = tmp_path / "settings.env"
        settings.write_text("RIESZ_DEFAULT_TOL=1e-9\nLOG_LEVEL=WARNING\n")
        assert main(["--config", str(settings), "check-iso", "--dims", "2x2", "--trials", "1"]) == 0
        assert json.loads(capsys.readouterr().out)["metadata"]["tol"] == 1e-9

    def test_no_command(self):
        """A command is required."""
        assert main([]) == 2
