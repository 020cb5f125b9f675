"""End-to-end subcommand tests: outputs, exit codes, determinism and the
blockage comparison, all on desk-scale horizons."""

import json

import numpy as np
import pytest

from uiobeam.cli import main
from uiobeam.config import config_from_mapping
from uiobeam.simulate import run_compare, run_simulate


def write_yaml(tmp_path, text, name="cfg.yaml"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_csv(path):
    lines = path.read_text().strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_design_defaults_three_records(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["design", "--out", str(out)]) == 0
    records = json.loads((out / "design_records.json").read_text())
    assert len(records) == 3
    for record, bound in zip(records, (np.sqrt(0.05), 0.5, 1.0)):
        assert record["certified"]
        assert record["gamma"] <= bound
        assert len(record["L_diag"]) == 8
    printed = capsys.readouterr().out
    assert printed.count("certified=True") == 3
    assert (out / "manifest.json").exists()


def test_design_single_mu(tmp_path):
    cfg = write_yaml(tmp_path, "observer:\n  mu_max: [0.25]\n")
    out = tmp_path / "out"
    assert main(["design", "--config", cfg, "--out", str(out)]) == 0
    records = json.loads((out / "design_records.json").read_text())
    assert len(records) == 1


def test_design_infeasible_mu_exit_code(tmp_path):
    cfg = write_yaml(tmp_path, "observer:\n  mu_max: [1.0e-9]\n")
    assert main(["design", "--config", cfg, "--out", str(tmp_path / "out")]) == 2


def test_unknown_key_exit_code(tmp_path):
    cfg = write_yaml(tmp_path, "observer:\n  mu_maxx: [0.25]\n")
    assert main(["design", "--config", cfg, "--out", str(tmp_path / "out")]) == 1


def test_out_collides_with_file_exit_code(tmp_path):
    cfg = write_yaml(tmp_path, "observer:\n  mu_max: [0.25]\n")
    blocker = tmp_path / "blocked"
    blocker.write_text("a file, not a directory")
    assert main(["design", "--config", cfg, "--out", str(blocker)]) == 3


def simulate_config(tmp_path, horizon=60, extra=""):
    return write_yaml(
        tmp_path,
        f"observer:\n  mu_max: [0.05]\nrun:\n  horizon: {horizon}\n{extra}",
    )


def test_simulate_outputs_and_row_counts(tmp_path):
    out = tmp_path / "out"
    assert main(["simulate", "--config", simulate_config(tmp_path), "--out", str(out)]) == 0
    sub = out / "design_mu0.05"
    manifest = json.loads((out / "manifest.json").read_text())
    header, rows = read_csv(sub / "trajectories.csv")
    assert header == ["k", "t", "uav_id", "x_true", "y_true", "x_pred", "y_pred", "err_norm"]
    assert len(rows) == 60 * 4
    header, rows = read_csv(sub / "inputs.csv")
    assert header == ["k", "uav_id", "wx_true", "wy_true", "wx_est", "wy_est", "err_norm"]
    assert len(rows) == 60 * 4
    header, rows = read_csv(sub / "se.csv")
    assert header == ["k", "uav_id", "mode", "sinr_db", "se_bpshz"]
    assert len(rows) == 60 * 4
    assert {r[2] for r in rows} == {"uio"}
    for k in (0, 30, 59):
        header, rows = read_csv(sub / f"pattern_k{k}.csv")
        assert header == ["theta_deg", "beam_id", "gain_db"]
        assert len(rows) == 721 * 4
    for name, count in manifest["files"].items():
        assert count == len(read_csv(out / name)[1])


def test_simulate_seed_and_horizon_flags(tmp_path):
    out = tmp_path / "out"
    code = main([
        "simulate", "--config", simulate_config(tmp_path), "--out", str(out),
        "--seed", "9", "--horizon", "40",
    ])
    assert code == 0
    manifest = json.loads((out / "manifest.json").read_text())
    assert manifest["seed"] == 9
    assert len(read_csv(out / "design_mu0.05" / "trajectories.csv")[1]) == 40 * 4


def test_simulate_byte_identical_reruns(tmp_path):
    cfg = simulate_config(tmp_path)
    out_a, out_b = tmp_path / "a", tmp_path / "b"
    assert main(["simulate", "--config", cfg, "--out", str(out_a)]) == 0
    assert main(["simulate", "--config", cfg, "--out", str(out_b)]) == 0
    names = json.loads((out_a / "manifest.json").read_text())["files"]
    assert names
    for name in names:
        assert (out_a / name).read_bytes() == (out_b / name).read_bytes()


def test_simulate_unperturbed_exact_measurement_converges(tmp_path):
    # stationary fleet (omega 0), no perturbation, exact measurements, zero
    # observer init: the prediction converges to the truth
    cfg = write_yaml(
        tmp_path,
        "scenario:\n  omega: 0.0\n  perturbation_ratio: 0.0\n"
        "measurement:\n  d_scale: 0.0\n"
        "observer:\n  mu_max: [0.05]\n  init: zero\n"
        "run:\n  horizon: 80\n",
    )
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out / "design_mu0.05" / "trajectories.csv")
    late = [float(r[7]) for r in rows if int(r[0]) >= 60]
    assert max(late) < 1e-6


def test_simulate_default_designs_emit_three_track_sets(tmp_path):
    cfg = write_yaml(tmp_path, "run:\n  horizon: 30\n")
    out = tmp_path / "out"
    assert main(["simulate", "--config", cfg, "--out", str(out)]) == 0
    for label in ("0.05", "0.25", "1"):
        assert (out / f"design_mu{label}" / "trajectories.csv").exists()


def test_sweep_dt_single_mu_single_row(tmp_path):
    cfg = write_yaml(tmp_path, "observer:\n  mu_max: [0.25]\n")
    out = tmp_path / "out"
    assert main(["sweep-dt", "--config", cfg, "--out", str(out)]) == 0
    _, rows = read_csv(out / "sweep_dt.csv")
    assert len(rows) == 1
    assert float(rows[0][1]) == pytest.approx(1.0, abs=5e-3)


def test_sweep_dt_ordering(tmp_path, capsys):
    out = tmp_path / "out"
    assert main(["sweep-dt", "--out", str(out)]) == 0
    _, rows = read_csv(out / "sweep_dt.csv")
    crit = {float(r[0]): float(r[1]) for r in rows}
    assert crit[0.05] < crit[0.25] < crit[1.0]


def test_sweep_dt_entirely_feasible_bracket(tmp_path):
    cfg = write_yaml(
        tmp_path, "observer:\n  mu_max: [0.25]\nrun:\n  sweep_dt_high: 0.5\n"
    )
    assert main(["sweep-dt", "--config", cfg, "--out", str(tmp_path / "out")]) == 2


def test_compare_requires_window(tmp_path):
    cfg = write_yaml(tmp_path, "observer:\n  mu_max: [0.05]\nrun:\n  horizon: 50\n")
    assert main(["compare-baseline", "--config", cfg, "--out", str(tmp_path / "out")]) == 1


def test_compare_window_gap_positive(tmp_path, capsys):
    cfg = write_yaml(
        tmp_path,
        "observer:\n  mu_max: [0.05]\n"
        "blockage:\n  windows: [[12.0, 15.0]]\n"
        "run:\n  horizon: 150\n",
    )
    out = tmp_path / "out"
    assert main(["compare-baseline", "--config", cfg, "--out", str(out)]) == 0
    summary = json.loads((out / "compare_summary.json").read_text())
    assert summary["window_se_gap"] > 0.0
    assert summary["blocked_steps"] == 20
    assert "gap=" in capsys.readouterr().out


def test_compare_full_horizon_window_gap_grows(tmp_path):
    cfg = config_from_mapping({
        "observer": {"mu_max": [0.05]},
        "blockage": {"windows": [[0.0, 30.0]]},
        "run": {"horizon": 200},
    })
    summary = run_compare(cfg, tmp_path / "out")
    assert summary["window_se_gap"] > 0.0
    header, rows = read_csv(tmp_path / "out" / "se_compare.csv")
    gaps = [float(r[3]) - float(r[4]) for r in rows]
    assert np.mean(gaps[150:]) > np.mean(gaps[:50])


def test_compare_paired_noise_equality_outside_windows(tmp_path):
    cfg = config_from_mapping({
        "observer": {"mu_max": [0.05]},
        "blockage": {"windows": [[12.0, 15.0]]},
        "run": {"horizon": 150},
    })
    run_compare(cfg, tmp_path / "out", force_uio_truth=True)
    _, rows = read_csv(tmp_path / "out" / "se_compare.csv")
    outside = [r for r in rows if r[2] == "0"]
    inside = [r for r in rows if r[2] == "1"]
    assert outside and inside
    for r in outside:
        assert abs(float(r[3]) - float(r[4])) <= 1e-9


def test_library_simulate_matches_cli(tmp_path):
    cfg = config_from_mapping({"observer": {"mu_max": [0.05]}, "run": {"horizon": 30}})
    manifest = run_simulate(cfg, tmp_path / "lib")
    assert manifest["files"]["design_mu0.05/trajectories.csv"] == 30 * 4
