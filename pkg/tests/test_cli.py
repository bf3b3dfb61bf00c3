"""Tests for the command-line entry point and command controller."""

import json

import pytest

from conftest import FIXTURES, fixture_path
from cutset_region.controllers.command_controller import CommandController
from cutset_region.main import run
from cutset_region.services import probkit


def invoke(capsys, *argv: str) -> tuple[int, dict]:
    code = run(list(argv))
    return code, json.loads(capsys.readouterr().out)


def test_region_writes_zero_region(capsys, tmp_path):
    """Test the echo network region is written to --out and is all zero."""
    out = tmp_path / "region.json"
    code, report = invoke(capsys, "region", fixture_path("identity_m2.txt"), "--grid", "5", "--out", str(out))
    assert code == 0
    assert report["success"]
    document = json.loads(out.read_text())
    assert document["convexified"]
    assert all(abs(x) < 1e-12 for generator in document["generators"] for x in generator)
    assert report["resolution"]["kind"] == "all"
    assert report["resolution"]["grid"] == 5


def test_check_finds_witness(capsys):
    """Test a lossless bit over a one-bit pipe."""
    code, report = invoke(capsys, "check", fixture_path("bit_over_pipe.txt"), "--grid", "5", "--deterministic-recs")
    assert code == 0
    assert report["status"] == "witness_found"
    assert report["result"]["deterministic"]
    assert report["search"]["deterministic_only"]
    assert "reconstruction" not in report["result"]


def test_check_reports_no_witness(capsys):
    """Test a lossless 4-ary symbol over a one-bit pipe."""
    code, report = invoke(capsys, "check", fixture_path("four_ary_over_pipe.txt"), "--grid", "5")
    assert code == 1
    assert not report["success"]
    result = report["result"]
    assert result["status"] == "no_witness_at_resolution"
    assert result["best_violated_cuts"] == [1]
    assert result["min_violation"] == pytest.approx(1.0, abs=1e-6)
    assert "note" in result["resolution"]


def test_check_given_reconstruction(capsys, tmp_path):
    """Test the containment verdict for a reconstruction given in the problem file."""
    path = tmp_path / "loose.txt"
    source = (FIXTURES / "noisy_reconstruction.txt").read_text(encoding="utf-8")
    path.write_text(source.replace("targets 0 0.2", "targets 0 0.3"), encoding="utf-8")
    code, report = invoke(capsys, "check", str(path), "--grid", "5")
    assert code == 0
    assert report["status"] == "witness_found"
    assert report["distortion"][1] == pytest.approx(0.25)
    expected = 1 - probkit.binary_entropy(0.25)
    assert report["virtual_cut_vector"][0] == pytest.approx(expected, abs=1e-12)


def test_check_invalid_candidate(capsys):
    """Test a reconstruction missing its distortion target."""
    code, report = invoke(capsys, "check", fixture_path("noisy_reconstruction.txt"), "--grid", "5")
    assert code == 2
    assert report["status"] == "invalid_candidate"
    assert report["distortion"][1] == pytest.approx(0.25)


def test_cutset_rates(capsys):
    """Test unit rates over two clean pipes."""
    code, report = invoke(capsys, "cutset-rates", fixture_path("two_pipes.txt"))
    assert code == 0
    assert report["inside"]
    assert report["demand"] == [1.0, 1.0]
    assert report["certificate"]["generator_indices"]


def test_perturb_repairs_noisy_reconstruction(capsys):
    """Test the repair of a reconstruction within D + eps."""
    code, report = invoke(capsys, "perturb", fixture_path("noisy_reconstruction.txt"))
    assert code == 0
    first, second = report["stages"]
    assert first["case"] == "indicator"
    assert first["p_q0"] == 0.0
    assert second["case"] == "mixing"
    assert second["p_q0"] == pytest.approx(0.2)
    assert second["budget"] == pytest.approx(0.2)
    assert report["distortion"][1] == pytest.approx(0.2, abs=1e-12)
    expected = probkit.binary_entropy(0.25) - probkit.binary_entropy(0.2)
    assert second["increase"][0] == pytest.approx(expected, abs=1e-12)
    assert report["variables"] == ["W1", "W2", "Mhat1", "Mhat2"]


def test_props_is_reproducible(capsys):
    """Test the property suite passes and prints identical bytes for a fixed seed."""
    assert run(["props", "--cases", "3", "--seed", "7"]) == 0
    first = capsys.readouterr().out
    assert run(["props", "--cases", "3", "--seed", "7"]) == 0
    assert capsys.readouterr().out == first
    assert json.loads(first)["failures"] == 0


def test_unreadable_spec_file(capsys, tmp_path):
    """Test a path that does not exist."""
    code, report = invoke(capsys, "region", str(tmp_path / "missing.txt"))
    assert code == 2
    assert report["error_code"] == "SPEC_FILE_UNREADABLE"


def test_malformed_spec_file(capsys, tmp_path):
    """Test a syntax error is reported with its position."""
    path = tmp_path / "bad.txt"
    path.write_text("[network]\nparties two\n", encoding="utf-8")
    code, report = invoke(capsys, "region", str(path))
    assert code == 2
    assert report["error_code"] == "SPEC_SYNTAX_ERROR"
    assert report["details"] == {"line": 2, "column": 9}


def test_missing_section(capsys):
    """Test cutset-rates on a spec without [rates]."""
    code, report = invoke(capsys, "cutset-rates", fixture_path("identity_m2.txt"))
    assert code == 2
    assert report["error_code"] == "MISSING_SECTION"
    assert report["details"]["missing"] == ["rates"]


def test_missing_spec_file(capsys):
    """Test a command that needs a spec file run without one."""
    code, report = invoke(capsys, "region")
    assert code == 2
    assert report["error_code"] == "MISSING_SPEC_FILE"


def test_invalid_flag(capsys):
    """Test a grid below 2."""
    code, report = invoke(capsys, "region", fixture_path("identity_m2.txt"), "--grid", "1")
    assert code == 2
    assert report["error_code"] == "INVALID_FLAG"
    assert report["message"].startswith("Invalid --grid")


def test_unknown_command_in_controller():
    """Test the controller refuses commands it does not know."""
    code, report = CommandController().run_command(None, "simulate")
    assert code == 2
    assert report.error_code == "UNKNOWN_COMMAND"
