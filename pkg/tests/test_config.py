"""Configuration parsing: reference defaults, overrides, strict unknown-key
rejection and field-qualified invariant errors."""

import numpy as np
import pytest

from uiobeam.config import config_from_mapping, config_hash, parse_config
from uiobeam.errors import ConfigError


def test_empty_config_resolves_reference_defaults():
    cfg = config_from_mapping({})
    np.testing.assert_array_equal(cfg.scenario.radii, [100.0, 150.0, 200.0, 250.0])
    assert cfg.scenario.omega == 0.5
    np.testing.assert_array_equal(cfg.scenario.dt, np.full(4, 0.15))
    np.testing.assert_allclose(cfg.scenario.phases, 2 * np.pi * np.arange(4) / 4)
    np.testing.assert_array_equal(cfg.model.d, 0.5 * np.eye(8))
    assert cfg.alpha == 0.5
    assert cfg.mu_list == (0.05, 0.25, 1.0)
    assert cfg.array.m_ce == 64 and cfg.array.n_u == 4
    assert cfg.array.wavelength == pytest.approx(299792458.0 / 30.0e9)
    assert cfg.horizon == 400 and cfg.seed == 0
    assert cfg.transient_cutoff == 50
    assert cfg.windows == ()
    # 10 dB per-stream reference SNR at 250 m
    h_ref = cfg.array.wavelength / (4 * np.pi * 250.0)
    assert cfg.sigma2 == pytest.approx(h_ref**2 / 40.0)


def test_empty_file_resolves_defaults(tmp_path):
    path = tmp_path / "empty.yaml"
    path.write_text("")
    cfg = parse_config(path)
    assert cfg.scenario.n_uavs == 4


def test_none_path_resolves_defaults():
    assert parse_config(None).horizon == 400


def test_antenna_override_accepted():
    cfg = config_from_mapping({"array": {"m_ce": 128}})
    assert cfg.array.m_ce == 128


def test_negative_dt_rejected_with_field_name():
    with pytest.raises(ConfigError, match="scenario.dt"):
        config_from_mapping({"scenario": {"dt": -0.15}})


def test_unknown_keys_listed():
    with pytest.raises(ConfigError) as excinfo:
        config_from_mapping({"observerx": {}, "run": {"horzon": 10}})
    message = str(excinfo.value)
    assert "observerx" in message and "run.horzon" in message


def test_scalar_mu_and_h_expand():
    cfg = config_from_mapping({"observer": {"mu_max": 0.25, "h_diag": 2.0}})
    assert cfg.mu_list == (0.25,)
    np.testing.assert_array_equal(cfg.h_diag, np.full(8, 2.0))


def test_explicit_d_diag():
    diag = list(np.linspace(0.1, 0.8, 8))
    cfg = config_from_mapping({"measurement": {"d_diag": diag}})
    np.testing.assert_allclose(np.diag(cfg.model.d), diag)
    with pytest.raises(ConfigError, match="d_diag"):
        config_from_mapping({"measurement": {"d_diag": [0.5, 0.5]}})


def test_n_uavs_radii_mismatch():
    with pytest.raises(ConfigError, match="n_uavs"):
        config_from_mapping({"scenario": {"n_uavs": 3, "radii": [100.0, 200.0]}})


def test_window_validation():
    base = {"run": {"horizon": 100}}
    with pytest.raises(ConfigError, match="beyond the horizon"):
        config_from_mapping({**base, "blockage": {"windows": [[5.0, 100.0]]}})
    with pytest.raises(ConfigError, match="t_start < t_end"):
        config_from_mapping({**base, "blockage": {"windows": [[5.0, 4.0]]}})
    cfg = config_from_mapping({**base, "blockage": {"windows": [[5.0, 8.0]]}})
    assert cfg.windows == ((5.0, 8.0),)


def test_alpha_and_init_validation():
    with pytest.raises(ConfigError, match="observer.alpha"):
        config_from_mapping({"observer": {"alpha": 1.5}})
    with pytest.raises(ConfigError, match="observer.init"):
        config_from_mapping({"observer": {"init": "guess"}})
    with pytest.raises(ConfigError, match="phase_mode"):
        config_from_mapping({"channel": {"phase_mode": "chaotic"}})


def test_horizon_and_snapshot_validation():
    with pytest.raises(ConfigError, match="run.horizon"):
        config_from_mapping({"run": {"horizon": 0}})
    with pytest.raises(ConfigError, match="pattern_snapshots"):
        config_from_mapping({"run": {"horizon": 10, "pattern_snapshots": [11]}})


def test_default_snapshots_cover_run():
    cfg = config_from_mapping({"run": {"horizon": 100}})
    assert cfg.pattern_snapshots == (0, 50, 99)


def test_hash_stable_under_reordering():
    a = config_from_mapping({"scenario": {"omega": 0.5, "radii": [100.0, 150.0, 200.0, 250.0]},
                             "run": {"seed": 3, "horizon": 100}})
    b = config_from_mapping({"run": {"horizon": 100, "seed": 3},
                             "scenario": {"radii": [100.0, 150.0, 200.0, 250.0], "omega": 0.5}})
    assert config_hash(a) == config_hash(b)


def test_hash_changes_with_content():
    a = config_from_mapping({})
    b = config_from_mapping({"run": {"seed": 1}})
    assert config_hash(a) != config_hash(b)


def test_yaml_round_trip(tmp_path):
    path = tmp_path / "cfg.yaml"
    path.write_text(
        "scenario:\n  omega: 0.25\n  dt: 0.1\nobserver:\n  mu_max: [0.05]\n"
        "run:\n  horizon: 50\n  seed: 7\n"
    )
    cfg = parse_config(path)
    assert cfg.scenario.omega == 0.25
    assert cfg.mu_list == (0.05,)
    assert cfg.horizon == 50 and cfg.seed == 7
