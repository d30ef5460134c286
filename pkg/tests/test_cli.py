"""End-to-end command line runs: artifacts, config merging, exit codes."""

import json
import math
import shutil
import subprocess
import sys

import pytest

from imcflow.cli import main

TAU = 4.0 * math.pi


def _run(*argv):
    return main(list(argv))


def test_solve_writes_artifacts(tmp_path, capsys):
    assert _run("solve", "--model", "euclidean", "--out", str(tmp_path)) == 0
    out = capsys.readouterr().out
    assert "max existence time" in out
    assert "proper: yes" in out
    doc = json.loads((tmp_path / "jumps.json").read_text())
    assert doc["model"] == "euclidean"
    assert doc["jump_times"] == []
    assert doc["initial_radius"] == 1.0
    header = (tmp_path / "solution.csv").read_text().splitlines()[0]
    assert header == "r,warp,running_min,arrival"


def test_solve_reruns_are_byte_stable(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    for out in (a, b):
        assert _run("solve", "--model", "dip", "--out", str(out)) == 0
    assert (a / "solution.csv").read_bytes() == (b / "solution.csv").read_bytes()
    assert (a / "jumps.json").read_bytes() == (b / "jumps.json").read_bytes()


def test_solve_refine_reports_shift(tmp_path, capsys):
    assert _run("solve", "--model", "euclidean", "--num", "512",
                "--refine", "--out", str(tmp_path)) == 0
    assert "refine shift" in capsys.readouterr().out
    doc = json.loads((tmp_path / "jumps.json").read_text())
    assert doc["refine"]["base_points"] == 512
    assert doc["refine"]["refined_points"] == 1024
    assert 0.0 <= doc["refine"]["max_arrival_shift"] < 1e-6


def test_profile_command_and_nondegeneracy(tmp_path, capsys):
    assert _run("profile", "--profile", "euclidean:n=3",
                "--area", "12.0", "--out", str(tmp_path)) == 0
    out = capsys.readouterr().out
    assert "PASS" in out
    assert (tmp_path / "profile.csv").exists()
    doc = json.loads((tmp_path / "nondegeneracy.json").read_text())
    assert doc["passed"] is True


def test_profile_degenerate_exits_2(tmp_path):
    table = tmp_path / "flat.csv"
    table.write_text(f"volume,area\n1.0,{TAU}\n1e9,{TAU}\n")
    code = _run("profile", "--profile", f"table:{table}",
                "--area", str(TAU), "--out", str(tmp_path))
    assert code == 2


def test_profile_bad_spec_exits_1(tmp_path, capsys):
    assert _run("profile", "--profile", "power:c=1",
                "--out", str(tmp_path)) == 1
    assert "config error" in capsys.readouterr().err
    assert _run("profile", "--profile", "nope", "--out", str(tmp_path)) == 1
    assert _run("profile", "--profile", "power:c=x,a=1",
                "--out", str(tmp_path)) == 1


def test_hull_command_plateau(tmp_path, capsys):
    assert _run("hull", "--model", "dip", "--omega", "1.0", "--cells", "400",
                "--span", "12", "--profile", "candidate",
                "--out", str(tmp_path)) == 0
    doc = json.loads((tmp_path / "hull.json").read_text())
    # the strict hull of the unit ball fills the plateau exactly
    assert doc["outer_radius"] == 2.0
    assert doc["formula_radius"] == 2.0
    assert math.isclose(doc["perimeter_after"], TAU, rel_tol=1e-12)
    assert math.isclose(doc["perimeter_before"], TAU, rel_tol=1e-12)
    region = json.loads((tmp_path / "hull_region.json").read_text())
    assert len(region["cells"]) > 0
    assert "hull outer radius" in capsys.readouterr().out


def test_hull_on_cylinder_exits_2(tmp_path, capsys):
    code = _run("hull", "--model", "cylinder", "--omega", "1.0",
                "--cells", "200", "--span", "20", "--out", str(tmp_path))
    assert code == 2
    assert capsys.readouterr().err != ""


def test_bounds_command(tmp_path, capsys):
    assert _run("bounds", "--model", "euclidean", "--profile", "euclidean",
                "--times", "0,1,2", "--out", str(tmp_path)) == 0
    doc = json.loads((tmp_path / "bounds.json").read_text())
    assert doc["all_contained"] is True
    assert len(doc["rows"]) == 3
    csv_lines = (tmp_path / "bounds.csv").read_text().splitlines()
    assert len(csv_lines) == 4
    assert "contained=yes" in capsys.readouterr().out


def test_bounds_violation_exits_3(tmp_path, capsys):
    # a profile far above the true one breaks containment once rho_t
    # outruns the shrunken comparison radius
    c = 20.0 * (36.0 * math.pi) ** (1.0 / 3.0)
    code = _run("bounds", "--model", "euclidean",
                "--profile", f"power:c={c!r},a={2.0 / 3.0!r}",
                "--times", "3.0", "--out", str(tmp_path))
    assert code == 3
    assert "containment FAILED" in capsys.readouterr().out
    doc = json.loads((tmp_path / "bounds.json").read_text())
    assert doc["all_contained"] is False


def test_certify_command(tmp_path, capsys):
    assert _run("certify", "--model", "euclidean", "--cells", "2000",
                "--out", str(tmp_path)) == 0
    out = capsys.readouterr().out
    assert "certification: PASS" in out
    doc = json.loads((tmp_path / "certification.json").read_text())
    assert doc["passed"] is True
    assert doc["cells"] == 2000
    assert all(row["violation"] < 1e-4 for row in doc["rows"])


def test_certify_perturbed_exits_3(tmp_path, capsys):
    code = _run("certify", "--model", "euclidean", "--cells", "2000",
                "--perturb", "0.2", "--seed", "7", "--out", str(tmp_path))
    assert code == 3
    assert "certification: FAIL" in capsys.readouterr().out
    doc = json.loads((tmp_path / "certification.json").read_text())
    assert doc["passed"] is False
    assert doc["seed"] == 7
    assert doc["perturbation"] == 0.2
    assert "perturbed_cell" in doc


def test_certify_explicit_window_and_times(tmp_path):
    assert _run("certify", "--model", "euclidean", "--cells", "1500",
                "--window", "1.8,4.0", "--times", "1.0,2.0",
                "--out", str(tmp_path)) == 0
    doc = json.loads((tmp_path / "certification.json").read_text())
    assert [row["time"] for row in doc["rows"]] == [1.0, 2.0]


def test_exhaust_command(tmp_path, capsys):
    assert _run("exhaust", "--model", "dip", "--profile", "candidate",
                "--klist", "12,52,56", "--out", str(tmp_path)) == 0
    out = capsys.readouterr().out
    assert "stabilization: PASS" in out
    doc = json.loads((tmp_path / "stabilization.json").read_text())
    assert doc["k1_surrogate"] == 52.0
    assert doc["passed"] is True
    assert doc["entries"][2]["agrees_with_prev"] == 0.0
    assert (tmp_path / "solution_k12.csv").exists()
    assert (tmp_path / "solution_k52.csv").exists()
    assert (tmp_path / "solution_k56.csv").exists()


def test_exhaust_needs_klist(tmp_path, capsys):
    assert _run("exhaust", "--model", "dip", "--out", str(tmp_path)) == 1
    assert "klist" in capsys.readouterr().err


def test_exhaust_degenerate_exits_2(tmp_path, capsys):
    code = _run("exhaust", "--model", "cylinder", "--klist", "10",
                "--out", str(tmp_path))
    assert code == 2
    assert "NonDegeneracyExceeded" in capsys.readouterr().err


def test_limit_command(tmp_path, capsys):
    assert _run("limit", "--model", "euclidean", "--profile", "euclidean",
                "--levels", "0.5,1.0", "--out", str(tmp_path)) == 0
    assert "limit agreement: PASS" in capsys.readouterr().out
    doc = json.loads((tmp_path / "limit.json").read_text())
    assert doc["max_disagreement"] == 0.0
    assert [e["cutoff"] for e in doc["entries"]] == [14.0, 18.0]
    assert (tmp_path / "solution.csv").exists()


def test_config_supplies_defaults_and_flags_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({
        "manifold": {"name": "euclidean"},
        "pipeline": {"command": "solve", "r0": 2.0},
        "grid": {"num": 1024},
    }))
    out1 = tmp_path / "one"
    assert _run("solve", "--config", str(cfg), "--out", str(out1)) == 0
    doc = json.loads((out1 / "jumps.json").read_text())
    assert doc["initial_radius"] == 2.0
    # an explicit flag wins over the config value
    out2 = tmp_path / "two"
    assert _run("solve", "--config", str(cfg), "--r0", "3.0",
                "--out", str(out2)) == 0
    doc = json.loads((out2 / "jumps.json").read_text())
    assert doc["initial_radius"] == 3.0


def test_config_command_mismatch_exits_1(tmp_path, capsys):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"pipeline": {"command": "solve"},
                               "manifold": {"name": "euclidean"}}))
    assert _run("bounds", "--config", str(cfg), "--out", str(tmp_path)) == 1
    assert "does not match" in capsys.readouterr().err


def test_config_rejects_unknown_sections(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"bogus": {}, "manifold": {"name": "euclidean"}}))
    assert _run("solve", "--config", str(cfg), "--out", str(tmp_path)) == 1


def test_config_rejects_malformed_json(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text("{not json")
    assert _run("solve", "--config", str(cfg), "--out", str(tmp_path)) == 1


def test_missing_model_exits_1(tmp_path, capsys):
    assert _run("solve", "--out", str(tmp_path)) == 1
    assert "no model selected" in capsys.readouterr().err


def test_unknown_model_is_usage_error(tmp_path):
    with pytest.raises(SystemExit) as exc:
        _run("solve", "--model", "saddle", "--out", str(tmp_path))
    assert exc.value.code == 1


def test_unknown_subcommand_is_usage_error():
    with pytest.raises(SystemExit) as exc:
        _run("transmogrify")
    assert exc.value.code == 1


@pytest.mark.slow
def test_console_script(tmp_path):
    exe = shutil.which("imcflow")
    if exe is None:
        pytest.skip("console script not on PATH")
    proc = subprocess.run(
        [exe, "solve", "--model", "euclidean", "--out", str(tmp_path)],
        capture_output=True, text=True, timeout=300)
    assert proc.returncode == 0
    assert "proper: yes" in proc.stdout
    assert (tmp_path / "solution.csv").exists()
    proc = subprocess.run(
        [sys.executable, "-m", "imcflow.cli", "solve", "--model", "nope"],
        capture_output=True, text=True, timeout=300)
    assert proc.returncode == 1
