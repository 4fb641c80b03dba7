"""End-to-end checks of the wmsim command-line tool."""

import json
import math
import os
import subprocess

import pytest

CLI = os.environ.get("WMSIM_CLI", "wmsim")


def run(*args, check=True):
    proc = subprocess.run([CLI, *args], capture_output=True, text=True)
    if check:
        assert proc.returncode == 0, proc.stderr
    return proc


def test_simulate_trivial_point():
    proc = run("simulate", "--phi", "45", "--theta", "0", "--format", "json")
    doc = json.loads(proc.stdout)
    row = doc["rows"][0]
    assert row["diff_pipeline"] == pytest.approx(0.0, abs=1e-12)
    assert row["p_postselect"] == pytest.approx(0.5, abs=1e-12)


def test_simulate_optimal_point():
    proc = run("simulate", "--phi", "67.5", "--theta", "11.25", "--format", "json")
    row = json.loads(proc.stdout)["rows"][0]
    assert abs(row["diff_pipeline"]) == pytest.approx(1.0, abs=1e-12)
    assert row["fluctuation"] <= 1e-12
    assert row["abs_residual"] <= 1e-12


def test_simulate_near_optimal_values():
    proc = run("simulate", "--phi", "67.5", "--theta", "11.0", "--format", "json")
    row = json.loads(proc.stdout)["rows"][0]
    assert abs(row["diff_pipeline"]) == pytest.approx(0.99969, abs=1e-4)
    assert row["fluctuation"] == pytest.approx(0.02489, abs=1e-4)


def test_simulate_csv_row():
    proc = run("simulate", "--phi", "67.5", "--theta", "11.0", "--format", "csv")
    lines = proc.stdout.strip().split("\n")
    assert len(lines) == 2
    assert lines[0].startswith("phi,theta,zeta,")
    fields = lines[1].split(",")
    assert float(fields[0]) == 67.5
    assert abs(abs(float(fields[4])) - 0.99969) < 1e-4


def test_help_exits_cleanly():
    proc = run("--help")
    assert "simulate" in proc.stdout and "sweep" in proc.stdout


def test_simulate_singular_exit_code():
    proc = run("simulate", "--phi", "90", "--theta", "0", check=False)
    assert proc.returncode == 3
    assert proc.stderr


def test_usage_error_exit_code():
    proc = run("sweep", "--phi", "45", check=False)  # missing --theta
    assert proc.returncode == 2


def test_empty_range_is_usage_error():
    proc = run("sweep", "--phi", "45", "--theta", "5", "0", "1", check=False)
    assert proc.returncode == 2
    proc = run("sweep", "--phi", "45", "--theta", "0", "5", "-1", check=False)
    assert proc.returncode == 2


def test_sweep_csv_shape_and_determinism(tmp_path):
    args = ("sweep", "--phi", "67.5", "--theta", "0", "22", "0.5", "--interpretation", "sigma-y")
    first = run(*args).stdout
    second = run(*args).stdout
    assert first == second
    lines = first.strip().split("\n")
    assert lines[0] == (
        "phi,theta,zeta,diff_closed,diff_pipeline,variance,fluctuation,p_postselect,"
        "s_corresponding,gaussian_q,gaussian_p,istkh_diff,abs_residual"
    )
    assert len(lines) == 1 + 45
    residuals = [float(line.split(",")[-1]) for line in lines[1:]]
    assert max(residuals) <= 1e-12

    out_path = tmp_path / "sweep.csv"
    run(*args, "--output", str(out_path))
    assert out_path.read_text() == first


def test_sweep_json_envelope():
    proc = run("sweep", "--phi", "67.5", "--theta", "0", "4", "1", "--format", "json")
    doc = json.loads(proc.stdout)
    assert doc["schema_version"] == 1
    assert doc["command"] == "sweep"
    assert len(doc["rows"]) == 5
    assert doc["rows"][0]["s_corresponding"] == pytest.approx(0.0)


def test_sweep_unwritable_output_is_io_error(tmp_path):
    proc = run("sweep", "--phi", "45", "--theta", "0", "2", "1",
               "--output", str(tmp_path / "missing_dir" / "x.csv"), check=False)
    assert proc.returncode == 4


def test_optimal():
    proc = run("optimal", "--weak-value", "1", "--format", "json")
    row = json.loads(proc.stdout)["rows"][0]
    assert row["theta_star"] == pytest.approx(22.5, abs=1e-9)

    proc = run("optimal", "--phi", "67.5", "--format", "json")
    row = json.loads(proc.stdout)["rows"][0]
    assert row["theta_star"] == pytest.approx(11.25, abs=1e-6)
    assert row["s_star"] == pytest.approx(-math.log(math.cos(math.pi / 4)), abs=1e-9)
    assert row["fluctuation"] <= 1e-12

    proc = run("optimal", "--weak-value", "0", check=False)
    assert proc.returncode == 3


def test_montecarlo_deterministic_bytes():
    args = ("montecarlo", "--phi", "67.5", "--theta", "11.0", "--n-photons", "1000000",
            "--seed", "42", "--format", "json")
    first = run(*args)
    second = run(*args)
    assert first.stdout == second.stdout
    row = json.loads(first.stdout)["rows"][0]
    assert row["estimate_defined"]
    assert abs(row["estimate"] - 0.99969) <= 4.0 * row["stderr"] + 1e-5


def test_montecarlo_undefined_estimate():
    proc = run("montecarlo", "--phi", "90", "--theta", "0", "--n-photons", "1000",
               "--seed", "1", "--format", "json")
    row = json.loads(proc.stdout)["rows"][0]
    assert row["n_postselected"] == 0
    assert not row["estimate_defined"]
    assert row["estimate"] is None


def test_compare_experiment_fit():
    proc = run("compare-experiment", "--weak-value", "2.41421",
               "--row", "11.0,0.857,0.00537", "--row", "2.2,0.311,0.0131",
               "--fit-theta", "11.0", "--format", "json")
    doc = json.loads(proc.stdout)
    assert doc["params"]["visibility"] == pytest.approx(0.85727, abs=1e-4)
    assert doc["rows"][1]["predicted_diff"] == pytest.approx(0.3079, abs=1e-3)
    ratios = doc["fluctuation_ratios"]
    assert ratios[0]["theory_fluctuation_ratio"] == pytest.approx(37.484, rel=1e-3)
    assert ratios[0]["measured_error_ratio"] == pytest.approx(2.4395, rel=1e-3)
    assert "other noise sources" in doc["note"]


def test_config_file(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("phi = 67.5\ntheta = 11.25\nformat = json\n")
    proc = run("simulate", "--config", str(cfg))
    row = json.loads(proc.stdout)["rows"][0]
    assert abs(row["diff_pipeline"]) == pytest.approx(1.0, abs=1e-12)

    # flags override the file
    proc = run("simulate", "--config", str(cfg), "--theta", "0")
    row = json.loads(proc.stdout)["rows"][0]
    assert row["diff_pipeline"] == pytest.approx(0.0, abs=1e-12)
