import numpy as np
import pytest

from inertia_id.excitation import ProfileKind, generate
from inertia_id.params import (SATELLITES, DisturbanceParams, InertiaMode,
                               InertiaSchedule)
from inertia_id.sensors import SensorConfig


def static_schedule(params, horizon=300.0):
    return InertiaSchedule(InertiaMode.STATIC, params.inertia_nominal, horizon)


@pytest.fixture(scope="session")
def cubesat():
    return SATELLITES["CubeSat"]


@pytest.fixture(scope="session")
def microsat():
    return SATELLITES["Microsat"]


@pytest.fixture(scope="session")
def noiseless():
    return SensorConfig.noiseless()


@pytest.fixture(scope="session")
def no_disturbance():
    return DisturbanceParams.disabled()


@pytest.fixture(scope="session")
def cubesat_chirp_trace(cubesat, noiseless, no_disturbance):
    """Noise-free CubeSat chirp episode, shared by several test modules."""
    from inertia_id.dynamics import simulate
    profile = generate(ProfileKind.CHIRP, 300.0, 0.1, cubesat.rw_max_torque)
    return simulate(cubesat, static_schedule(cubesat), profile,
                    no_disturbance, noiseless, seed=7)
