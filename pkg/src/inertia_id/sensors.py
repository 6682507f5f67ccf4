"""Reaction-wheel saturation and additive Gaussian measurement noise."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import SatelliteParams

__all__ = ["SensorConfig", "saturate_command", "measure", "measurement_streams"]


@dataclass(frozen=True)
class SensorConfig:
    """Gyroscope and wheel-tachometer noise levels (1-sigma, additive)."""

    gyro_noise_std: float = 1.0e-3
    wheel_speed_noise_std: float = 0.1
    enabled: bool = True

    def __post_init__(self):
        if self.gyro_noise_std < 0 or self.wheel_speed_noise_std < 0:
            raise ValueError("noise standard deviations must be non-negative")

    @classmethod
    def noiseless(cls) -> "SensorConfig":
        return cls(enabled=False)


def saturate_command(tau_cmd: np.ndarray, wheel_speed: np.ndarray,
                     params: SatelliteParams) -> np.ndarray:
    """Map a commanded wheel torque to the torque the wheel can accept.

    Magnitudes clamp to rw_max_torque. A wheel sitting at its speed limit
    delivers zero torque in the direction that would push it further out;
    momentum bookkeeping stays exact because no fictitious braking torque
    is introduced.
    """
    tau = np.clip(np.asarray(tau_cmd, dtype=float),
                  -params.rw_max_torque, params.rw_max_torque).copy()
    w = np.asarray(wheel_speed, dtype=float)
    tau[(w >= params.rw_max_speed) & (tau > 0)] = 0.0
    tau[(w <= -params.rw_max_speed) & (tau < 0)] = 0.0
    return tau


def measurement_streams(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """Independent counter-based RNG streams for gyro and tachometer noise.

    Each run gets its own pair derived from the run seed; disabling one
    sensor never shifts the other's sequence.
    """
    gyro_ss, wheel_ss = np.random.SeedSequence(seed).spawn(2)
    return (np.random.Generator(np.random.Philox(gyro_ss)),
            np.random.Generator(np.random.Philox(wheel_ss)))


def measure(omega: np.ndarray, wheel_speed: np.ndarray, cfg: SensorConfig,
            gyro_rng: np.random.Generator, wheel_rng: np.random.Generator
            ) -> tuple[np.ndarray, np.ndarray]:
    """One noisy (gyro, tachometer) measurement of the true state."""
    if not cfg.enabled:
        return np.asarray(omega, dtype=float).copy(), np.asarray(wheel_speed, dtype=float).copy()
    omega_meas = np.asarray(omega) + gyro_rng.normal(0.0, cfg.gyro_noise_std, 3)
    wheel_meas = np.asarray(wheel_speed) + wheel_rng.normal(0.0, cfg.wheel_speed_noise_std, 3)
    return omega_meas, wheel_meas
