"""Rigid-body + reaction-wheel attitude dynamics and the simulation loop.

Conventions:
  - omega: body angular rate [rad/s], body frame.
  - attitude: unit quaternion, scalar first, body-to-inertial.
  - wheel torque is the torque driving the wheel; the body reaction is its
    negative. h_rw = I_rw * wheel_speed per axis (triad aligned with body axes).
  - Internal integration: classic fixed-step RK4 at dt = 0.01 s; commands and
    measurements live on a 0.1 s control grid (zero-order hold).

The hot integration path works on plain-float tuples (``_derivative``,
``_rk4_substep``); the public BodyState-based operations wrap the same kernel
so both paths produce bit-identical trajectories.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .excitation import ExcitationProfile
from .params import DisturbanceParams, InertiaSchedule, SatelliteParams
from .sensors import SensorConfig, measurement_streams, saturate_command

__all__ = [
    "BodyState",
    "SimTrace",
    "CONTROL_PERIOD",
    "INTERNAL_DT",
    "external_torque",
    "dynamics_derivative",
    "rk4_step",
    "simulate",
    "total_momentum",
    "momentum_drift",
]

CONTROL_PERIOD = 0.1   # command / measurement period [s]
INTERNAL_DT = 0.01     # integrator step [s]

_SQRT3 = math.sqrt(3.0)


@dataclass
class BodyState:
    """True dynamical state of the spacecraft at one instant."""

    omega: np.ndarray                      # (3,) rad/s
    attitude: np.ndarray                   # (4,) unit quaternion, scalar first
    wheel_speed: np.ndarray                # (3,) rad/s
    time: float = 0.0

    @classmethod
    def at_rest(cls) -> "BodyState":
        return cls(omega=np.zeros(3), attitude=np.array([1.0, 0.0, 0.0, 0.0]),
                   wheel_speed=np.zeros(3), time=0.0)

    def to_tuple(self) -> tuple:
        w, q, s = self.omega, self.attitude, self.wheel_speed
        return (w[0], w[1], w[2], q[0], q[1], q[2], q[3], s[0], s[1], s[2])

    @classmethod
    def from_tuple(cls, y: tuple, t: float) -> "BodyState":
        return cls(omega=np.array(y[0:3]), attitude=np.array(y[3:7]),
                   wheel_speed=np.array(y[7:10]), time=t)


@dataclass
class SimTrace:
    """Control-rate record of one simulated run.

    All arrays have n_samples rows; sample k holds the true state and
    measurement at t[k] plus the command acting over [t[k], t[k] + dt_ctrl).
    tau_applied is the realized wheel torque averaged over that interval
    (equal to the saturated command except while a wheel rides its speed
    limit), so I_rw * wheel-speed increments reconstruct it exactly.
    """

    t: np.ndarray                  # (N,)
    omega: np.ndarray              # (N, 3) true body rate
    omega_meas: np.ndarray         # (N, 3)
    wheel_speed: np.ndarray        # (N, 3) true
    wheel_speed_meas: np.ndarray   # (N, 3)
    tau_cmd: np.ndarray            # (N, 3) commanded wheel torque
    tau_applied: np.ndarray        # (N, 3) realized wheel torque (interval average)
    tau_ext: np.ndarray            # (N, 3) external torque at t[k]
    inertia_true: np.ndarray       # (N, 3) schedule evaluated at t[k]
    dt_ctrl: float
    params: SatelliteParams
    seed: int

    @property
    def n_samples(self) -> int:
        return self.t.shape[0]


# --------------------------------------------------------------------------
# scalar kernel
# --------------------------------------------------------------------------

def _external_torque_tuple(y, t, inertia, dist: DisturbanceParams):
    """External torque in body axes for kernel state ``y`` at time ``t``."""
    if dist is None or not dist.enabled:
        return (0.0, 0.0, 0.0)
    q0, q1, q2, q3 = y[3], y[4], y[5], y[6]
    n = dist.orbital_rate
    # nadir unit vector rotating in the inertial x-z plane
    ux = math.sin(n * t)
    uz = math.cos(n * t)
    # body components of the inertial vector (R^T u, R maps body->inertial)
    r00 = 1.0 - 2.0 * (q2 * q2 + q3 * q3)
    r01 = 2.0 * (q1 * q2 - q0 * q3)
    r02 = 2.0 * (q1 * q3 + q0 * q2)
    r10 = 2.0 * (q1 * q2 + q0 * q3)
    r11 = 1.0 - 2.0 * (q1 * q1 + q3 * q3)
    r12 = 2.0 * (q2 * q3 - q0 * q1)
    r20 = 2.0 * (q1 * q3 - q0 * q2)
    r21 = 2.0 * (q2 * q3 + q0 * q1)
    r22 = 1.0 - 2.0 * (q1 * q1 + q2 * q2)
    bx = r00 * ux + r20 * uz
    by = r01 * ux + r21 * uz
    bz = r02 * ux + r22 * uz
    ix, iy, iz = inertia
    k = 3.0 * n * n
    gx = k * by * bz * (iz - iy)
    gy = k * bz * bx * (ix - iz)
    gz = k * bx * by * (iy - ix)
    s = dist.srp_force * dist.cop_offset / _SQRT3
    return (gx + s, gy + s, gz + s)


def _make_inertia_fn(schedule: InertiaSchedule):
    """Closure returning (Ix, Iy, Iz) as plain floats, no range checks."""
    from .params import InertiaMode
    bx, by, bz = schedule.base
    mode = schedule.mode
    if mode is InertiaMode.STATIC:
        return lambda t: (bx, by, bz)
    if mode is InertiaMode.STEP_CHANGE:
        half, f = 0.5 * schedule.t_max, schedule.step_factor
        return lambda t: (bx, by, bz) if t < half else (f * bx, f * by, f * bz)
    if mode is InertiaMode.LINEAR_DRIFT:
        c = schedule.drift_factor / schedule.t_max

        def drift(t, bx=bx, by=by, bz=bz, c=c):
            s = 1.0 + c * t
            return (s * bx, s * by, s * bz)
        return drift
    w = 2.0 * math.pi * schedule.frequency
    a = schedule.periodic_amplitude

    def periodic(t, bx=bx, by=by, bz=bz, w=w, a=a):
        s = 1.0 + a * math.sin(w * t)
        return (s * bx, s * by, s * bz)
    return periodic


def _derivative(y, t, accel, inertia_fn, i_rw: float, dist: DisturbanceParams):
    """Time derivative of the 10-component kernel state.

    ``accel`` is the (already saturated) wheel acceleration held constant
    over the step; it drives both the wheel speeds and, through
    I_rw * accel, the reaction torque on the body, which keeps the internal
    momentum exchange exactly consistent.
    """
    wx, wy, wz = y[0], y[1], y[2]
    q0, q1, q2, q3 = y[3], y[4], y[5], y[6]
    ix, iy, iz = inertia_fn(t)
    a1, a2, a3 = accel
    hx = ix * wx + i_rw * y[7]
    hy = iy * wy + i_rw * y[8]
    hz = iz * wz + i_rw * y[9]
    tx, ty, tz = _external_torque_tuple(y, t, (ix, iy, iz), dist)
    gx = -(wy * hz - wz * hy) - i_rw * a1 + tx
    gy = -(wz * hx - wx * hz) - i_rw * a2 + ty
    gz = -(wx * hy - wy * hx) - i_rw * a3 + tz
    return (
        gx / ix, gy / iy, gz / iz,
        0.5 * (-q1 * wx - q2 * wy - q3 * wz),
        0.5 * (q0 * wx + q2 * wz - q3 * wy),
        0.5 * (q0 * wy - q1 * wz + q3 * wx),
        0.5 * (q0 * wz + q1 * wy - q2 * wx),
        a1, a2, a3,
    )


def _effective_accel(y, accel_cmd, dt, max_speed):
    """Clip the commanded wheel acceleration so no wheel crosses its speed
    limit within the step; a saturating wheel lands exactly on the limit.
    Evaluated once per step so the same acceleration feeds the body torque
    and the wheel-speed derivative (momentum stays conserved)."""
    out = []
    for i in range(3):
        a = accel_cmd[i]
        s = y[7 + i]
        target = s + a * dt
        if target > max_speed:
            a = max(0.0, (max_speed - s) / dt)
        elif target < -max_speed:
            a = min(0.0, (-max_speed - s) / dt)
        out.append(a)
    return tuple(out)


def _rk4_substep(y, t, dt, accel_cmd, inertia_fn, i_rw, max_speed, dist):
    """One classic RK4 step of the kernel state; quaternion renormalized and
    wheel speeds clamped (the acceleration clip makes the clamp a no-op up
    to roundoff)."""
    accel = _effective_accel(y, accel_cmd, dt, max_speed)
    k1 = _derivative(y, t, accel, inertia_fn, i_rw, dist)
    y2 = tuple(y[i] + 0.5 * dt * k1[i] for i in range(10))
    k2 = _derivative(y2, t + 0.5 * dt, accel, inertia_fn, i_rw, dist)
    y3 = tuple(y[i] + 0.5 * dt * k2[i] for i in range(10))
    k3 = _derivative(y3, t + 0.5 * dt, accel, inertia_fn, i_rw, dist)
    y4 = tuple(y[i] + dt * k3[i] for i in range(10))
    k4 = _derivative(y4, t + dt, accel, inertia_fn, i_rw, dist)
    c = dt / 6.0
    out = [y[i] + c * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]) for i in range(10)]
    norm = math.sqrt(out[3] * out[3] + out[4] * out[4] + out[5] * out[5] + out[6] * out[6])
    out[3] /= norm
    out[4] /= norm
    out[5] /= norm
    out[6] /= norm
    for i in (7, 8, 9):
        if out[i] > max_speed:
            out[i] = max_speed
        elif out[i] < -max_speed:
            out[i] = -max_speed
    return tuple(out)


# --------------------------------------------------------------------------
# public operations
# --------------------------------------------------------------------------

def external_torque(state: BodyState, params: SatelliteParams,
                    dist: DisturbanceParams, t: float,
                    schedule: InertiaSchedule | None = None) -> np.ndarray:
    """Gravity-gradient plus solar-pressure torque in body axes [N m].

    The gravity gradient uses the instantaneous true inertia; pass the
    schedule when it is time-varying, otherwise the nominal diagonal is used.
    """
    if not dist.enabled:
        return np.zeros(3)
    inertia = schedule.inertia_at(t) if schedule is not None else params.inertia
    return np.array(_external_torque_tuple(state.to_tuple(), t, tuple(inertia), dist))


def dynamics_derivative(state: BodyState, wheel_accel_cmd: np.ndarray,
                        schedule: InertiaSchedule, params: SatelliteParams,
                        dist: DisturbanceParams) -> BodyState:
    """Time derivative of the body state (rates, quaternion, wheel speeds).

    The commanded wheel acceleration is saturated against the speed limit
    over one internal step before use; the returned object packs the
    derivatives in BodyState fields with ``time`` = 1 (dt/dt).
    """
    inertia = schedule.inertia_at(state.time)
    if np.any(inertia <= 0.0):
        raise FloatingPointError("non-positive inertia at t=%g" % state.time)
    y = state.to_tuple()
    accel = _effective_accel(y, tuple(wheel_accel_cmd), INTERNAL_DT, params.rw_max_speed)
    d = _derivative(y, state.time, accel, _make_inertia_fn(schedule),
                    params.rw_inertia, dist)
    return BodyState(omega=np.array(d[0:3]), attitude=np.array(d[3:7]),
                     wheel_speed=np.array(d[7:10]), time=1.0)


def rk4_step(state: BodyState, wheel_accel_cmd: np.ndarray,
             schedule: InertiaSchedule, params: SatelliteParams,
             dist: DisturbanceParams, dt: float = INTERNAL_DT) -> BodyState:
    """Advance one RK4 step with the wheel command held constant over dt."""
    if dt <= 0:
        raise ValueError("dt must be positive")
    y = _rk4_substep(state.to_tuple(), state.time, dt, tuple(wheel_accel_cmd),
                     _make_inertia_fn(schedule), params.rw_inertia,
                     params.rw_max_speed, dist)
    return BodyState.from_tuple(y, state.time + dt)


def total_momentum(omega: np.ndarray, wheel_speed: np.ndarray,
                   inertia: np.ndarray, rw_inertia: float) -> np.ndarray:
    """Total angular momentum I*omega + I_rw*wheel_speed in body axes."""
    return np.asarray(inertia) * np.asarray(omega) + rw_inertia * np.asarray(wheel_speed)


def momentum_drift(trace: SimTrace) -> float:
    """Worst relative drift of ||I*omega + h_rw|| over a trace.

    Normalized by max(||h(0)||, peak momentum content) so rest starts
    (h(0) = 0) are judged against the momentum actually exchanged.
    """
    h = trace.inertia_true * trace.omega + trace.params.rw_inertia * trace.wheel_speed
    h_norm = np.linalg.norm(h, axis=1)
    scale = max(
        h_norm[0],
        float(np.max(np.linalg.norm(trace.inertia_true * trace.omega, axis=1)
                     + trace.params.rw_inertia * np.linalg.norm(trace.wheel_speed, axis=1))),
        1e-30,
    )
    return float(np.max(np.abs(h_norm - h_norm[0])) / scale)


def simulate(params: SatelliteParams, schedule: InertiaSchedule,
             profile: ExcitationProfile, dist: DisturbanceParams,
             sensor_cfg: SensorConfig, seed: int,
             _truth_cache: dict | None = None) -> SimTrace:
    """Run one excitation episode and return the control-rate trace.

    Starts from rest (zero rates and wheel speeds, identity attitude).
    Measurement noise is overlaid on a noise-free truth pass; passing a
    dict as ``_truth_cache`` lets repeated seeds of the same configuration
    reuse the integrated truth without changing any output.
    """
    if abs(profile.duration - schedule.t_max) > 1e-9:
        raise ValueError("profile duration must equal the schedule horizon")
    key = None
    truth = None
    if _truth_cache is not None:
        key = (params.name, id(profile), schedule.mode, schedule.t_max,
               dist.enabled, dist.orbital_rate, dist.srp_force, dist.cop_offset)
        truth = _truth_cache.get(key)
    if truth is None:
        truth = _integrate_truth(params, schedule, profile, dist)
        if _truth_cache is not None:
            _truth_cache[key] = truth
    t, omega, wheel, tau_cmd, tau_app, tau_ext, inertia_true = truth

    gyro_rng, wheel_rng = measurement_streams(seed)
    n = t.shape[0]
    if sensor_cfg.enabled:
        omega_meas = omega + gyro_rng.normal(0.0, sensor_cfg.gyro_noise_std, (n, 3))
        wheel_meas = wheel + wheel_rng.normal(0.0, sensor_cfg.wheel_speed_noise_std, (n, 3))
    else:
        omega_meas = omega.copy()
        wheel_meas = wheel.copy()

    return SimTrace(t=t.copy(), omega=omega.copy(), omega_meas=omega_meas,
                    wheel_speed=wheel.copy(), wheel_speed_meas=wheel_meas,
                    tau_cmd=tau_cmd.copy(), tau_applied=tau_app.copy(),
                    tau_ext=tau_ext.copy(), inertia_true=inertia_true.copy(),
                    dt_ctrl=profile.dt_ctrl, params=params, seed=seed)


def _integrate_truth(params: SatelliteParams, schedule: InertiaSchedule,
                     profile: ExcitationProfile, dist: DisturbanceParams):
    """Noise-free forward integration sampled at the control period."""
    dt_ctrl = profile.dt_ctrl
    n = profile.samples.shape[0]
    substeps = max(1, round(dt_ctrl / INTERNAL_DT))
    dt = dt_ctrl / substeps
    i_rw = params.rw_inertia
    max_speed = params.rw_max_speed

    t_grid = np.arange(n) * dt_ctrl
    omega = np.empty((n, 3))
    wheel = np.empty((n, 3))
    tau_app = np.empty((n, 3))
    tau_ext_log = np.empty((n, 3))
    inertia_true = np.empty((n, 3))
    tau_cmd = np.array(profile.samples, dtype=float)

    y = (0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0)
    dist_on = dist.enabled
    inertia_fn = _make_inertia_fn(schedule)
    for k in range(n):
        tk = k * dt_ctrl
        omega[k] = y[0:3]
        wheel[k] = y[7:10]
        inertia_true[k] = inertia_fn(tk)
        if dist_on:
            tau_ext_log[k] = _external_torque_tuple(y, tk, tuple(inertia_true[k]), dist)
        else:
            tau_ext_log[k] = 0.0
        applied = saturate_command(tau_cmd[k], np.array(y[7:10]), params)
        accel_cmd = (applied[0] / i_rw, applied[1] / i_rw, applied[2] / i_rw)
        w_before = y[7:10]
        for j in range(substeps):
            y = _rk4_substep(y, tk + j * dt, dt, accel_cmd, inertia_fn,
                             i_rw, max_speed, dist)
        # realized torque: exact interval average from the wheel momentum change
        tau_app[k, 0] = i_rw * (y[7] - w_before[0]) / dt_ctrl
        tau_app[k, 1] = i_rw * (y[8] - w_before[1]) / dt_ctrl
        tau_app[k, 2] = i_rw * (y[9] - w_before[2]) / dt_ctrl
    return t_grid, omega, wheel, tau_cmd, tau_app, tau_ext_log, inertia_true
