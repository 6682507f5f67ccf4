import numpy as np
import pytest

from inertia_id.params import (SATELLITES, InertiaMode, InertiaSchedule,
                               SatelliteParams, inertia_at)


def test_table_presets_exist():
    assert set(SATELLITES) == {"CubeSat", "Microsat", "SmallSat"}
    assert SATELLITES["CubeSat"].inertia_nominal == (0.26, 0.26, 0.16)
    assert SATELLITES["Microsat"].rw_max_torque == 0.1
    assert SATELLITES["SmallSat"].rw_max_speed == 1500.0


def test_params_reject_nonpositive():
    with pytest.raises(ValueError):
        SatelliteParams("bad", mass=-1.0, dims=(1, 1, 1),
                        inertia_nominal=(1, 1, 1), rw_inertia=1e-4,
                        rw_max_torque=0.01, rw_max_speed=100, rw_diameter=0.1)


def test_params_reject_triangle_violation():
    with pytest.raises(ValueError):
        SatelliteParams("bad", mass=1.0, dims=(1, 1, 1),
                        inertia_nominal=(1.0, 1.0, 2.5), rw_inertia=1e-4,
                        rw_max_torque=0.01, rw_max_speed=100, rw_diameter=0.1)


def test_static_returns_base_microsat():
    sched = InertiaSchedule(InertiaMode.STATIC, (6.53, 5.96, 4.53), 300.0)
    np.testing.assert_array_equal(inertia_at(sched, 150.0), [6.53, 5.96, 4.53])
    np.testing.assert_array_equal(inertia_at(sched, 0.0), inertia_at(sched, 300.0))


def test_step_change_boundary():
    sched = InertiaSchedule(InertiaMode.STEP_CHANGE, (1.0, 1.0, 1.0), 300.0)
    np.testing.assert_allclose(inertia_at(sched, 150.0), [1.1, 1.1, 1.1])
    np.testing.assert_array_equal(inertia_at(sched, 149.999), [1.0, 1.0, 1.0])


def test_periodic_quarter_period_peak():
    # sin(2pi * 0.02 * 12.5) = sin(pi/2) = 1
    sched = InertiaSchedule(InertiaMode.PERIODIC, (1.0, 1.0, 1.0), 300.0,
                            frequency=0.02)
    np.testing.assert_allclose(inertia_at(sched, 12.5), [1.03, 1.03, 1.03],
                               rtol=1e-12)


def test_drift_endpoints():
    sched = InertiaSchedule(InertiaMode.LINEAR_DRIFT, (2.0, 2.0, 2.0), 300.0)
    np.testing.assert_allclose(inertia_at(sched, 0.0), [2.0, 2.0, 2.0])
    np.testing.assert_allclose(inertia_at(sched, 300.0), [2.1, 2.1, 2.1])


def test_out_of_range_time_rejected():
    sched = InertiaSchedule(InertiaMode.STATIC, (1.0, 1.0, 1.0), 300.0)
    with pytest.raises(ValueError):
        inertia_at(sched, -0.1)
    with pytest.raises(ValueError):
        inertia_at(sched, 300.1)


@pytest.mark.parametrize("mode", [InertiaMode.LINEAR_DRIFT, InertiaMode.PERIODIC])
def test_continuous_modes_have_no_jumps(mode):
    sched = InertiaSchedule(mode, (1.0, 2.0, 3.0), 300.0)
    t = np.linspace(0.0, 300.0, 20001)
    values = np.array([sched.scale_at(ti) for ti in t])
    assert np.max(np.abs(np.diff(values))) < 1e-4


def test_step_mode_has_exactly_one_jump():
    sched = InertiaSchedule(InertiaMode.STEP_CHANGE, (1.0, 1.0, 1.0), 300.0)
    t = np.linspace(0.0, 300.0, 30001)
    values = np.array([sched.scale_at(ti) for ti in t])
    jumps = np.nonzero(np.abs(np.diff(values)) > 1e-12)[0]
    assert len(jumps) == 1
    assert abs(t[jumps[0] + 1] - 150.0) < 0.02


def test_positivity_over_horizon():
    for mode in InertiaMode:
        sched = InertiaSchedule(mode, (0.26, 0.26, 0.16), 300.0)
        t = np.linspace(0.0, 300.0, 3001)
        assert all(np.all(sched.inertia_at(ti) > 0) for ti in t)
