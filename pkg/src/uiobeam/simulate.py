"""Experiment orchestration and data emission for the CLI subcommands.

Every CSV body is byte-stable for a fixed config + seed: floats are written
with 17 significant digits, rows in a fixed order, no timestamps. Wall-clock
lives only in the manifest. Per-design and per-mode runs are independent and
each writes its own files; the orchestration here runs them sequentially.
"""

import json
import time
from pathlib import Path

import numpy as np

from . import beamforming as bf
from . import observer as obs
from .config import config_hash
from .design import LmiProblem, critical_dt
from .design import design as solve_design
from .errors import ConfigError, DegenerateGeometryError

PATTERN_SPAN_DEG = 89.75


def _fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def write_csv(path, header, rows):
    """Write rows with deterministic formatting; returns the row count."""
    path = Path(path)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")
    return len(rows)


def mu_label(mu):
    return format(float(mu), "g")


def design_problem(cfg, mu_max, alpha=None):
    return LmiProblem(
        alpha=cfg.alpha if alpha is None else alpha,
        b_t=cfg.scenario.b_t,
        d=cfg.model.d,
        h=np.diag(cfg.h_diag),
        mu_max=mu_max,
    )


def run_design(cfg):
    """One certified design per configured mu bound.

    Returns (records, designs) where records are JSON-ready dicts and designs
    are the matching (LmiSolution, ObserverGains) pairs.
    """
    records = []
    designs = []
    for mu_max in cfg.mu_list:
        solution, gains = solve_design(design_problem(cfg, mu_max))
        designs.append((solution, gains))
        records.append({
            "alpha": cfg.alpha,
            "mu_max": mu_max,
            "mu": solution.mu,
            "gamma": solution.gamma,
            "L_diag": np.diag(gains.l).tolist(),
            "Q_diag": np.diag(gains.q).tolist(),
            "certified": bool(solution.certified),
        })
    return records, designs


def _true_angles(cfg, x_stacked):
    return bf.angles_from_positions(x_stacked, cfg.scenario.center, signed=True)


def _predicted_angles(cfg, xhat_stacked):
    # Quadrant-aware variant: the arccos form cannot steer below-axis UAVs.
    # A prediction still sitting on the central UAV (zero-init transient) has
    # no defined azimuth; steer broadside until it moves away.
    positions = np.asarray(xhat_stacked, float).reshape(-1, 2)
    angles = np.empty(positions.shape[0])
    for i, pos in enumerate(positions):
        try:
            angles[i] = bf.signed_angular_position(pos, cfg.scenario.center)
        except DegenerateGeometryError:
            angles[i] = 0.0
    return angles


def _channel_at(cfg, x_stacked, rng):
    positions = np.asarray(x_stacked, float).reshape(-1, 2)
    return bf.ChannelRealization.line_of_sight(
        cfg.array, positions, cfg.scenario.center, cfg.sigma2,
        phase_mode=cfg.phase_mode, rng=rng,
    )


def link_timeseries(cfg, run, mode="uio", windows=()):
    """Analytic per-step link reports along a tracking run.

    Returns (sinr_db, se), each (horizon, N).
    """
    n = cfg.scenario.n_uavs
    horizon = cfg.horizon
    provider = bf.AngleProvider(mode, windows, dt=float(cfg.scenario.dt[0]))
    rng = np.random.default_rng(cfg.seed)
    sinr_db = np.empty((horizon, n))
    se = np.empty((horizon, n))
    for k in range(horizon):
        angles = provider.angles(
            k, _true_angles(cfg, run["X"][k]), _predicted_angles(cfg, run["XHAT"][k])
        )
        beams = bf.safe_beamformer(cfg.array, angles)
        chan = _channel_at(cfg, run["X"][k], rng)
        power = bf.equal_power_allocation(beams, cfg.total_power)
        report = bf.link_report(cfg.array, chan, beams, power)
        sinr_db[k] = report.sinr_db
        se[k] = report.se
    return sinr_db, se


def _write_tracking_csvs(cfg, run, out_dir, files):
    n = cfg.scenario.n_uavs
    dt0 = float(cfg.scenario.dt[0])
    traj_rows = []
    input_rows = []
    for k in range(cfg.horizon):
        t = k * dt0
        xt = run["X"][k].reshape(n, 2)
        xp = run["XHAT"][k].reshape(n, 2)
        wt = run["W"][k].reshape(n, 2)
        wh = run["WHAT"][k].reshape(n, 2)
        for i in range(n):
            traj_rows.append((
                k, t, i, xt[i, 0], xt[i, 1], xp[i, 0], xp[i, 1],
                float(np.linalg.norm(xp[i] - xt[i])),
            ))
            input_rows.append((
                k, i, wt[i, 0], wt[i, 1], wh[i, 0], wh[i, 1],
                float(np.linalg.norm(wh[i] - wt[i])),
            ))
    files["trajectories.csv"] = write_csv(
        out_dir / "trajectories.csv",
        ["k", "t", "uav_id", "x_true", "y_true", "x_pred", "y_pred", "err_norm"],
        traj_rows,
    )
    files["inputs.csv"] = write_csv(
        out_dir / "inputs.csv",
        ["k", "uav_id", "wx_true", "wy_true", "wx_est", "wy_est", "err_norm"],
        input_rows,
    )


def _write_se_csv(cfg, run, out_dir, files, mode="uio"):
    sinr_db, se = link_timeseries(cfg, run, mode=mode)
    rows = []
    for k in range(cfg.horizon):
        for i in range(cfg.scenario.n_uavs):
            rows.append((k, i, mode, sinr_db[k, i], se[k, i]))
    files["se.csv"] = write_csv(
        out_dir / "se.csv", ["k", "uav_id", "mode", "sinr_db", "se_bpshz"], rows
    )


def _write_pattern_csvs(cfg, run, out_dir, files):
    grid_deg = np.linspace(-PATTERN_SPAN_DEG, PATTERN_SPAN_DEG, cfg.pattern_points)
    grid = np.deg2rad(grid_deg)
    for k in cfg.pattern_snapshots:
        angles = _predicted_angles(cfg, run["XHAT"][k])
        beams = bf.safe_beamformer(cfg.array, angles)
        gains_db = bf.beam_pattern(cfg.array, beams.f, grid)
        rows = []
        for g in range(grid.size):
            for beam in range(cfg.scenario.n_uavs):
                rows.append((grid_deg[g], beam, gains_db[g, beam]))
        name = f"pattern_k{k}.csv"
        files[name] = write_csv(out_dir / name, ["theta_deg", "beam_id", "gain_db"], rows)


def write_manifest(out_dir, cfg, files, wall_clock_s):
    from . import __version__

    manifest = {
        "config_hash": config_hash(cfg),
        "version": __version__,
        "seed": cfg.seed,
        "files": dict(sorted(files.items())),
        "wall_clock_s": wall_clock_s,
    }
    with open(Path(out_dir) / "manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest


def run_simulate(cfg, out_dir):
    """Tracking + link + pattern CSVs, one subdirectory per configured design."""
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records, designs = run_design(cfg)
    files = {}
    for record, (solution, gains) in zip(records, designs):
        sub = out_dir / f"design_mu{mu_label(record['mu_max'])}"
        sub.mkdir(parents=True, exist_ok=True)
        run = obs.track(
            cfg.scenario, cfg.model, gains, cfg.horizon, gamma=solution.gamma,
            init=cfg.observer_init, transient_cutoff=cfg.transient_cutoff,
        )
        sub_files = {}
        _write_tracking_csvs(cfg, run, sub, sub_files)
        _write_se_csv(cfg, run, sub, sub_files)
        _write_pattern_csvs(cfg, run, sub, sub_files)
        for name, rows in sub_files.items():
            files[f"{sub.name}/{name}"] = rows
    with open(out_dir / "design_records.json", "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return write_manifest(out_dir, cfg, files, time.perf_counter() - t0)


def run_sweep_dt(cfg, out_dir):
    """Critical measurement-interval frontier per configured mu bound."""
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    bracket = (cfg.sweep_dt_low, cfg.sweep_dt_high)
    rows = []
    for mu_max in cfg.mu_list:
        prob = design_problem(cfg, mu_max)
        rows.append((mu_max, critical_dt(prob, bracket)))
    files = {
        "sweep_dt.csv": write_csv(
            out_dir / "sweep_dt.csv", ["mu_max", "critical_dt_s"], rows
        )
    }
    write_manifest(out_dir, cfg, files, time.perf_counter() - t0)
    return rows


def run_compare(cfg, out_dir, force_uio_truth=False):
    """Paired blockage comparison of the prediction-fed and echo-fed links.

    Both modes consume identical per-step draws (symbols + post-combining
    noise) and the same physical channel; only the steering angles differ.
    force_uio_truth substitutes true angles into the prediction path, the
    paired-noise sanity check.
    """
    if not cfg.windows:
        raise ConfigError("compare-baseline needs at least one blockage window")
    t0 = time.perf_counter()
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    records, designs = run_design(cfg)
    solution, gains = designs[0]
    run = obs.track(
        cfg.scenario, cfg.model, gains, cfg.horizon, gamma=solution.gamma,
        init=cfg.observer_init, transient_cutoff=cfg.transient_cutoff,
    )
    dt0 = float(cfg.scenario.dt[0])
    echo = bf.AngleProvider("echo_baseline", cfg.windows, dt=dt0)
    uio = bf.AngleProvider("uio", dt=dt0)
    rng = np.random.default_rng(cfg.seed)
    n = cfg.scenario.n_uavs
    rows = []
    se_uio = np.empty(cfg.horizon)
    se_echo = np.empty(cfg.horizon)
    blocked = np.empty(cfg.horizon, dtype=bool)
    for k in range(cfg.horizon):
        true_angles = _true_angles(cfg, run["X"][k])
        pred_angles = true_angles if force_uio_truth else _predicted_angles(cfg, run["XHAT"][k])
        chan = _channel_at(cfg, run["X"][k], rng)
        symbols, noise = bf.draw_link_samples(n, cfg.sigma2, rng, cfg.noise_draws)
        per_mode = {}
        for name, provider, predicted in (
            ("uio", uio, pred_angles), ("echo_baseline", echo, None),
        ):
            angles = provider.angles(k, true_angles, predicted)
            beams = bf.safe_beamformer(cfg.array, angles)
            power = bf.equal_power_allocation(beams, cfg.total_power)
            per_mode[name] = float(np.mean(
                bf.empirical_link_se(cfg.array, chan, beams, power, symbols, noise)
            ))
        se_uio[k] = per_mode["uio"]
        se_echo[k] = per_mode["echo_baseline"]
        blocked[k] = echo.blocked(k)
        rows.append((k, k * dt0, blocked[k], se_uio[k], se_echo[k]))
    files = {
        "se_compare.csv": write_csv(
            out_dir / "se_compare.csv",
            ["k", "t", "in_window", "se_uio", "se_echo_baseline"],
            rows,
        )
    }
    summary = {
        "window_mean_se_uio": float(np.mean(se_uio[blocked])),
        "window_mean_se_echo_baseline": float(np.mean(se_echo[blocked])),
        "outside_mean_se_uio": float(np.mean(se_uio[~blocked])) if np.any(~blocked) else None,
        "outside_mean_se_echo_baseline": (
            float(np.mean(se_echo[~blocked])) if np.any(~blocked) else None
        ),
        "windows": [list(w) for w in cfg.windows],
        "blocked_steps": int(np.sum(blocked)),
    }
    summary["window_se_gap"] = (
        summary["window_mean_se_uio"] - summary["window_mean_se_echo_baseline"]
    )
    with open(out_dir / "compare_summary.json", "w", encoding="utf-8") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    write_manifest(out_dir, cfg, files, time.perf_counter() - t0)
    return summary
