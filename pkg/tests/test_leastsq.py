import math

import numpy as np
import pytest

from inertia_id.dynamics import SimTrace, simulate
from inertia_id.excitation import ProfileKind, generate
from inertia_id.leastsq import (LsProblem, build_problem, finite_diff_omega_dot,
                                regressor_row, solve)
from inertia_id.params import SatelliteParams
from inertia_id.sensors import SensorConfig

from conftest import static_schedule


def test_finite_diff_constant_series_is_zero():
    om = np.tile([0.1, 0.2, -0.3], (10, 1))
    np.testing.assert_array_equal(finite_diff_omega_dot(om, 0.1),
                                  np.zeros((8, 3)))


def test_finite_diff_linear_series_is_exact():
    t = np.arange(50) * 0.1
    om = np.stack([2.0 * t, -1.5 * t, 0.25 * t], axis=1)
    wdot = finite_diff_omega_dot(om, 0.1)
    np.testing.assert_allclose(wdot, np.tile([2.0, -1.5, 0.25], (48, 1)),
                               rtol=1e-12)


def test_finite_diff_sine_taylor_oracle():
    # independent oracle: (sin(1.1) - sin(0.9)) / 0.2, the attenuated cos(1.0)
    t = np.arange(0.0, 2.0, 0.1)
    om = np.stack([np.sin(t)] * 3, axis=1)
    wdot = finite_diff_omega_dot(om, 0.1)
    k = np.argmin(np.abs(t[1:-1] - 1.0))
    expected = (math.sin(1.1) - math.sin(0.9)) / 0.2
    assert expected == pytest.approx(0.539402, abs=1e-6)  # vs cos(1) = 0.540302
    assert wdot[k, 0] == pytest.approx(expected, rel=1e-12)


def test_finite_diff_needs_three_samples():
    with pytest.raises(ValueError):
        finite_diff_omega_dot(np.zeros((2, 3)), 0.1)


def test_regressor_row_hand_expansion():
    # omega = (1,2,3), wdot = 0: row x of A theta is (0, -6, +6) . theta
    a = regressor_row(np.array([1.0, 2.0, 3.0]), np.zeros(3))
    np.testing.assert_allclose(a[0], [0.0, -6.0, 6.0])
    np.testing.assert_allclose(a[1], [3.0, 0.0, -3.0])
    np.testing.assert_allclose(a[2], [-2.0, 2.0, 0.0])


def _synthetic_trace(params, omega, wheel_speed, tau_applied, dt=0.1):
    n = omega.shape[0]
    zeros = np.zeros((n, 3))
    return SimTrace(t=np.arange(n) * dt, omega=omega, omega_meas=omega.copy(),
                    wheel_speed=wheel_speed, wheel_speed_meas=wheel_speed.copy(),
                    tau_cmd=tau_applied.copy(), tau_applied=tau_applied,
                    tau_ext=zeros, inertia_true=np.tile(params.inertia, (n, 1)),
                    dt_ctrl=dt, params=params, seed=0)


def _plain_params(inertia=(1.0, 1.0, 1.0)):
    return SatelliteParams("test", mass=1.0, dims=(1, 1, 1),
                           inertia_nominal=inertia, rw_inertia=1e-4,
                           rw_max_torque=1.0, rw_max_speed=1e6,
                           rw_diameter=0.1)


def test_build_problem_zero_motion_gives_zero_regressor():
    params = _plain_params()
    n = 10
    trace = _synthetic_trace(params, np.zeros((n, 3)), np.zeros((n, 3)),
                             np.zeros((n, 3)))
    prob = build_problem(trace)
    np.testing.assert_array_equal(prob.a, np.zeros((3 * (n - 2), 3)))
    assert not np.isfinite(prob.condition_number)
    result = solve(prob)
    assert result.degenerate


def test_noise_free_chirp_recovers_cubesat_inertia(cubesat_chirp_trace, cubesat):
    result = solve(build_problem(cubesat_chirp_trace))
    rel = np.abs(result.inertia_hat - cubesat.inertia) / cubesat.inertia
    assert np.max(rel) < 1e-3
    assert not result.degenerate
    assert result.condition_number >= 1.0


def test_sample_pairing_also_identifies_but_less_exactly(cubesat_chirp_trace, cubesat):
    windowed = solve(build_problem(cubesat_chirp_trace, pairing="window"))
    sampled = solve(build_problem(cubesat_chirp_trace, pairing="sample"))
    rel_w = np.max(np.abs(windowed.inertia_hat - cubesat.inertia) / cubesat.inertia)
    rel_s = np.max(np.abs(sampled.inertia_hat - cubesat.inertia) / cubesat.inertia)
    assert rel_s < 0.05
    assert rel_w < rel_s


def test_unknown_pairing_rejected(cubesat_chirp_trace):
    with pytest.raises(ValueError):
        build_problem(cubesat_chirp_trace, pairing="midpoint")


def test_lower_bound_respected():
    # rows that pull one component negative must clamp at the bound
    rng = np.random.default_rng(3)
    a = rng.normal(size=(40, 3))
    theta_true = np.array([2.0, -0.5, 1.0])
    prob = LsProblem(a=a, b=a @ theta_true, lower=np.full(3, 1e-6),
                     condition_number=1.0, n_samples=40, pairing="window")
    result = solve(prob)
    assert result.inertia_hat[1] == pytest.approx(1e-6)
    assert np.all(result.inertia_hat >= 1e-6 - 1e-18)


def test_scale_equivariance(no_disturbance, noiseless):
    base = (0.4, 0.5, 0.6)
    c = 7.0
    small = SatelliteParams("small", mass=1.0, dims=(1, 1, 1),
                            inertia_nominal=base, rw_inertia=1e-4,
                            rw_max_torque=0.01, rw_max_speed=1e6,
                            rw_diameter=0.1)
    big = SatelliteParams("big", mass=1.0, dims=(1, 1, 1),
                          inertia_nominal=tuple(c * b for b in base),
                          rw_inertia=1e-4, rw_max_torque=0.01,
                          rw_max_speed=1e6, rw_diameter=0.1)
    profile = generate(ProfileKind.SINE, 60.0, 0.1, 0.01)
    tr_small = simulate(small, static_schedule(small, horizon=60.0), profile,
                        no_disturbance, noiseless, seed=0)
    tr_big = simulate(big, static_schedule(big, horizon=60.0), profile,
                      no_disturbance, noiseless, seed=0)
    est_small = solve(build_problem(tr_small)).inertia_hat
    est_big = solve(build_problem(tr_big)).inertia_hat
    np.testing.assert_allclose(est_big, c * est_small, rtol=1e-6)


def test_tau_ext_flag_changes_target(cubesat, noiseless):
    from inertia_id.params import DisturbanceParams
    profile = generate(ProfileKind.SINE, 30.0, 0.1, cubesat.rw_max_torque)
    trace = simulate(cubesat, static_schedule(cubesat, horizon=30.0), profile,
                     DisturbanceParams(), noiseless, seed=0)
    with_ext = build_problem(trace, tau_ext_known=True)
    without = build_problem(trace, tau_ext_known=False)
    assert np.any(with_ext.b != without.b)
    np.testing.assert_array_equal(with_ext.a, without.a)
