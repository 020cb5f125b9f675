"""Kinematics tests: velocity/perturbation profiles, stepping arithmetic,
the lumped-input identity and the measurement map."""

import numpy as np
import pytest

from uiobeam.dynamics import (
    Measurement,
    MeasurementModel,
    NetworkState,
    UavScenario,
    UnknownInput,
    initial_state,
    measure,
    nominal_velocity,
    perturbation,
    random_input,
    scenario_input,
    simulate_truth,
    step_truth,
    step_with_input,
    uav_positions,
)
from uiobeam.errors import ShapeError


def single_uav(radius=100.0, omega=0.5, dt=0.15, **kwargs):
    return UavScenario(radii=[radius], omega=omega, phases=[0.0],
                       center=[0.0, 0.0], dt=[dt], **kwargs)


def reference_scenario(**kwargs):
    return UavScenario.evenly_phased([100.0, 150.0, 200.0, 250.0], 0.5, 0.15, **kwargs)


def test_nominal_velocity_at_start():
    np.testing.assert_allclose(nominal_velocity(single_uav(), 0, 0), [50.0, 0.0], atol=1e-12)


def test_nominal_velocity_zero_rate():
    np.testing.assert_allclose(nominal_velocity(single_uav(omega=0.0), 0, 5), [0.0, 0.0])


def test_nominal_velocity_quarter_turn():
    # dt chosen so omega*dt*k = pi/2 at k = 1
    scn = single_uav(dt=np.pi / 2 / 0.5)
    np.testing.assert_allclose(nominal_velocity(scn, 0, 1), [0.0, -50.0], atol=1e-12)


def test_nominal_velocity_index_range():
    with pytest.raises(IndexError):
        nominal_velocity(single_uav(), 1, 0)


def test_perturbation_at_start():
    np.testing.assert_allclose(perturbation(single_uav(), 0, 0), [10.0, 0.0], atol=1e-12)


def test_perturbation_disabled():
    scn = single_uav(perturbation_ratio=0.0)
    np.testing.assert_allclose(perturbation(scn, 0, 3), [0.0, 0.0])


def test_perturbation_largest_radius():
    scn = single_uav(radius=250.0)
    np.testing.assert_allclose(perturbation(scn, 0, 0), [25.0, 0.0], atol=1e-12)


def test_step_stationary():
    scn = single_uav()
    state = NetworkState(x=[100.0, 0.0], k=0)
    inp = UnknownInput.from_components([0.0, 0.0], [0.0, 0.0], scn.b_t_diag)
    np.testing.assert_array_equal(step_with_input(state, scn, inp).x, state.x)


def test_step_arithmetic_single_uav():
    # 100 + 0.15*50 + 10 = 117.5
    scn = single_uav()
    state = NetworkState(x=[100.0, 0.0], k=0)
    inp = UnknownInput.from_components([50.0, 0.0], [10.0, 0.0], scn.b_t_diag)
    np.testing.assert_allclose(step_with_input(state, scn, inp).x, [117.5, 0.0])


def test_step_truth_phase_zero_start():
    # With all phases at zero, step 0 displaces each UAV along x by
    # dT*R_i*omega + R_i*omega/5.
    radii = np.array([100.0, 150.0, 200.0, 250.0])
    scn = UavScenario(radii=radii, omega=0.5, phases=np.zeros(4),
                      center=[0.0, 0.0], dt=np.full(4, 0.15))
    state = initial_state(scn)
    nxt, inp = step_truth(state, scn)
    delta = uav_positions(nxt.x) - uav_positions(state.x)
    np.testing.assert_allclose(delta[:, 0], 0.15 * radii * 0.5 + radii * 0.5 / 5.0)
    np.testing.assert_allclose(delta[:, 1], 0.0, atol=1e-12)
    assert nxt.k == 1 and inp.w.shape == (8,)


def test_lumped_input_identity_exact():
    scn = reference_scenario()
    for k in (0, 7, 123):
        inp = scenario_input(scn, k)
        np.testing.assert_array_equal(inp.w, inp.v + inp.lam / scn.b_t_diag)
    rng = np.random.default_rng(5)
    inp = random_input(scn, rng)
    np.testing.assert_array_equal(inp.w, inp.v + inp.lam / scn.b_t_diag)


def test_measure_zero_d_is_exact():
    scn = reference_scenario()
    state = initial_state(scn)
    inp = scenario_input(scn, 0)
    model = MeasurementModel(d=np.zeros((8, 8)))
    np.testing.assert_array_equal(measure(state, inp, model).y, state.x)


def test_measure_half_identity():
    scn = reference_scenario()
    state = NetworkState(x=np.zeros(8), k=0)
    w = np.zeros(8)
    w[0] = 2.0
    inp = UnknownInput.from_components(w, np.zeros(8), scn.b_t_diag)
    model = MeasurementModel.scaled_identity(4, 0.5)
    expected = np.zeros(8)
    expected[0] = 1.0
    np.testing.assert_allclose(measure(state, inp, model).y, expected)


def test_measure_identity_d_adds_input():
    scn = reference_scenario()
    rng = np.random.default_rng(2)
    state = NetworkState(x=rng.standard_normal(8), k=0)
    inp = random_input(scn, rng)
    model = MeasurementModel.scaled_identity(4, 1.0)
    np.testing.assert_allclose(measure(state, inp, model).y, state.x + inp.w)


def test_measure_dimension_mismatch():
    scn = reference_scenario()
    state = initial_state(scn)
    inp = scenario_input(scn, 0)
    with pytest.raises(ShapeError):
        measure(state, inp, MeasurementModel(d=np.zeros((4, 4))))


def test_unperturbed_orbit_drift_bound():
    # Forward-Euler circle drift: |  ||u_k - u_p|| - R  | <= R (omega dt)^2 k / 2.
    scn = reference_scenario(perturbation_ratio=0.0)
    model = MeasurementModel.scaled_identity(4, 0.0)
    xs, _, _ = simulate_truth(scn, model, 120)
    step = (scn.omega * scn.dt[0]) ** 2 / 2.0
    for k in range(121):
        radii_k = np.linalg.norm(uav_positions(xs[k]) - scn.center, axis=1)
        assert np.all(np.abs(radii_k - scn.radii) <= scn.radii * step * k + 1e-9)


def test_measurement_timeline_shapes():
    scn = reference_scenario()
    model = MeasurementModel.scaled_identity(4, 0.5)
    xs, ws, ys = simulate_truth(scn, model, 10)
    assert xs.shape == (11, 8) and ws.shape == (10, 8) and ys.shape == (10, 8)
    np.testing.assert_array_equal(ys[0], xs[0] + model.d @ ws[0])


def test_scenario_validation():
    with pytest.raises(ShapeError):
        UavScenario(radii=[100.0], omega=0.5, phases=[0.0], center=[0, 0], dt=[-0.1])
    with pytest.raises(ShapeError):
        UavScenario(radii=[-1.0], omega=0.5, phases=[0.0], center=[0, 0], dt=[0.1])
    with pytest.raises(ShapeError):
        UavScenario(radii=[100.0, 200.0], omega=0.5, phases=[0.0], center=[0, 0], dt=[0.1, 0.1])


def test_measurement_dataclass_index():
    m = Measurement(y=[1.0, 2.0], k=3)
    assert m.k == 3
