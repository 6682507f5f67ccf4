"""Physical parameters: spacecraft presets, inertia schedules, disturbances.

All inertia tensors in this package are diagonal (principal axes aligned
with the body frame); a 3-vector of principal moments stands in for the
full tensor everywhere. The reaction wheels form an orthogonal triad with
spin axes along the body axes and identical spin-axis inertia.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "SatelliteParams",
    "SATELLITES",
    "InertiaMode",
    "InertiaSchedule",
    "DisturbanceParams",
]


@dataclass(frozen=True)
class SatelliteParams:
    """Physical constants of one spacecraft and its reaction-wheel triad.

    Attributes:
        name: Preset label ("CubeSat", "Microsat", "SmallSat") or custom.
        mass: Total mass [kg].
        dims: Body box dimensions [m].
        inertia_nominal: Principal moments of inertia (Ix, Iy, Iz) [kg m^2].
        rw_inertia: Spin-axis inertia of each wheel [kg m^2].
        rw_max_torque: Torque saturation per wheel [N m].
        rw_max_speed: Speed saturation per wheel [rad/s].
        rw_diameter: Wheel diameter [m] (bookkeeping only).
    """

    name: str
    mass: float
    dims: tuple[float, float, float]
    inertia_nominal: tuple[float, float, float]
    rw_inertia: float
    rw_max_torque: float
    rw_max_speed: float
    rw_diameter: float

    def __post_init__(self):
        scalars = (self.mass, self.rw_inertia, self.rw_max_torque,
                   self.rw_max_speed, self.rw_diameter)
        if any(v <= 0 for v in scalars):
            raise ValueError("all satellite parameters must be strictly positive")
        if any(v <= 0 for v in self.dims) or any(v <= 0 for v in self.inertia_nominal):
            raise ValueError("dims and inertia_nominal must be strictly positive")
        ix, iy, iz = self.inertia_nominal
        if ix + iy < iz or iy + iz < ix or iz + ix < iy:
            raise ValueError("principal moments violate the triangle inequalities")

    @property
    def inertia(self) -> np.ndarray:
        return np.array(self.inertia_nominal, dtype=float)


# The three stock spacecraft, smallest to largest.
SATELLITES: dict[str, SatelliteParams] = {
    "CubeSat": SatelliteParams(
        name="CubeSat", mass=24.0, dims=(0.2, 0.2, 0.3),
        inertia_nominal=(0.26, 0.26, 0.16),
        rw_inertia=1.0e-4, rw_max_torque=0.01, rw_max_speed=460.0,
        rw_diameter=0.06,
    ),
    "Microsat": SatelliteParams(
        name="Microsat", mass=95.0, dims=(0.5, 0.6, 0.8),
        inertia_nominal=(6.53, 5.96, 4.53),
        rw_inertia=2.0e-3, rw_max_torque=0.1, rw_max_speed=900.0,
        rw_diameter=0.12,
    ),
    "SmallSat": SatelliteParams(
        name="SmallSat", mass=118.0, dims=(0.7, 0.8, 1.0),
        inertia_nominal=(10.6, 14.2, 15.3),
        rw_inertia=3.0e-3, rw_max_torque=0.1, rw_max_speed=1500.0,
        rw_diameter=0.14,
    ),
}


class InertiaMode(enum.Enum):
    """How the true inertia evolves over a run."""

    STATIC = "static"
    STEP_CHANGE = "step"
    LINEAR_DRIFT = "drift"
    PERIODIC = "periodic"

    @classmethod
    def from_name(cls, name: str) -> "InertiaMode":
        key = name.strip().lower().replace("-", "").replace("_", "")
        for mode in cls:
            if mode.value.replace("-", "") == key or mode.name.lower().replace("_", "") == key:
                return mode
        raise ValueError(f"unknown inertia mode: {name!r}")


@dataclass(frozen=True)
class InertiaSchedule:
    """Ground-truth diagonal inertia as a function of time.

    The dynamic modes scale the nominal diagonal uniformly:
      step:     base below t_max/2, step_factor * base at and above it
      drift:    base * (1 + drift_factor * t / t_max)
      periodic: base * (1 + periodic_amplitude * sin(2 pi frequency t))
    """

    mode: InertiaMode
    base: tuple[float, float, float]
    t_max: float
    frequency: float = 0.02
    step_factor: float = 1.1
    drift_factor: float = 0.05
    periodic_amplitude: float = 0.03

    def __post_init__(self):
        if self.t_max <= 0:
            raise ValueError("t_max must be positive")
        if any(b <= 0 for b in self.base):
            raise ValueError("base inertia must be strictly positive")
        # positivity over the whole horizon
        if self.mode is InertiaMode.STEP_CHANGE and self.step_factor <= 0:
            raise ValueError("step_factor must be positive")
        if self.mode is InertiaMode.LINEAR_DRIFT and 1.0 + self.drift_factor <= 0:
            raise ValueError("drift_factor leaves non-positive inertia")
        if self.mode is InertiaMode.PERIODIC and abs(self.periodic_amplitude) >= 1.0:
            raise ValueError("periodic_amplitude must have magnitude < 1")

    def scale_at(self, t: float) -> float:
        """Scalar multiplier applied to the base inertia at time t."""
        if t < 0.0 or t > self.t_max:
            raise ValueError(f"t={t} outside [0, {self.t_max}]")
        mode = self.mode
        if mode is InertiaMode.STATIC:
            return 1.0
        if mode is InertiaMode.STEP_CHANGE:
            return 1.0 if t < 0.5 * self.t_max else self.step_factor
        if mode is InertiaMode.LINEAR_DRIFT:
            return 1.0 + self.drift_factor * t / self.t_max
        return 1.0 + self.periodic_amplitude * math.sin(2.0 * math.pi * self.frequency * t)

    def inertia_at(self, t: float) -> np.ndarray:
        """Principal moments (Ix, Iy, Iz) at time t [kg m^2]."""
        return np.array(self.base, dtype=float) * self.scale_at(t)


def inertia_at(schedule: InertiaSchedule, t: float) -> np.ndarray:
    """Functional alias for ``schedule.inertia_at(t)``."""
    return schedule.inertia_at(t)


@dataclass(frozen=True)
class DisturbanceParams:
    """Simplified persistent external torques.

    Gravity gradient uses a nadir direction rotating in the inertial x-z
    plane at the fixed orbital rate; solar pressure acts as a constant
    body-frame torque of magnitude srp_force * cop_offset along (1,1,1)/sqrt(3).
    """

    orbital_rate: float = 1.0e-3
    srp_force: float = 1.0e-6
    cop_offset: float = 0.01
    enabled: bool = True

    def __post_init__(self):
        if self.orbital_rate < 0 or self.srp_force < 0 or self.cop_offset < 0:
            raise ValueError("disturbance magnitudes must be non-negative")

    @classmethod
    def disabled(cls) -> "DisturbanceParams":
        return cls(enabled=False)
