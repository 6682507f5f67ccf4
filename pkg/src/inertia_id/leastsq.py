"""Batch least-squares identification of the diagonal inertia.

Each control-rate sample contributes three equations that are affine in the
unknown principal moments theta = (Ix, Iy, Iz):

    A(t) theta = I wdot + omega x (I omega)
    b(t)       = -omega x h_rw - hdot_rw + tau_ext

with wdot reconstructed by central differences of the gyro series. Because
the residual is affine in theta, the bounded problem is solved exactly by
linear least squares with an active set on the (at most three) lower bounds,
instead of a generic trust-region iteration.

Two row-pairing schemes are available. "sample" evaluates every term at the
central sample. "window" (default) pairs the central difference with matched
averages over its two-sample support: Simpson weights for the smooth terms
and the exact two-interval mean for the piecewise-constant wheel torque.
The window pairing keeps noise behavior identical while removing the
finite-difference mismatch that otherwise biases broadband profiles.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import SimTrace
from .results import EstimateResult

__all__ = ["LsProblem", "finite_diff_omega_dot", "regressor_row",
           "build_problem", "solve"]

DEGENERATE_CONDITION = 1.0e12
DEFAULT_LOWER_BOUND = 1.0e-6


@dataclass
class LsProblem:
    """Stacked regressor A (3M x 3), target b (3M,), and bounds."""

    a: np.ndarray
    b: np.ndarray
    lower: np.ndarray
    condition_number: float
    n_samples: int          # usable (interior) samples M
    pairing: str


def finite_diff_omega_dot(omega_meas: np.ndarray, dt_ctrl: float) -> np.ndarray:
    """Central-difference angular acceleration; endpoints dropped.

    Returns an (N-2, 3) array: wdot[k] = (omega[k+1] - omega[k-1]) / (2 dt).
    """
    omega_meas = np.asarray(omega_meas, dtype=float)
    if omega_meas.ndim != 2 or omega_meas.shape[0] < 3:
        raise ValueError("need at least 3 samples of omega")
    return (omega_meas[2:] - omega_meas[:-2]) / (2.0 * dt_ctrl)


def regressor_row(omega: np.ndarray, omega_dot: np.ndarray) -> np.ndarray:
    """The 3x3 coefficient block of A theta = I wdot + omega x (I omega)
    for a single sample (used by the per-sample pairing and by tests)."""
    wx, wy, wz = omega
    a = np.diag(np.asarray(omega_dot, dtype=float))
    a[0, 1] += -wy * wz
    a[0, 2] += wy * wz
    a[1, 0] += wz * wx
    a[1, 2] += -wz * wx
    a[2, 0] += -wx * wy
    a[2, 1] += wx * wy
    return a


def _cross_coefficients(omega: np.ndarray) -> np.ndarray:
    """(N, 3, 3) coefficient blocks of omega x (I omega) w.r.t. diag(I)."""
    wx, wy, wz = omega[:, 0], omega[:, 1], omega[:, 2]
    n = omega.shape[0]
    c = np.zeros((n, 3, 3))
    pyz = wy * wz
    pzx = wz * wx
    pxy = wx * wy
    c[:, 0, 1] = -pyz
    c[:, 0, 2] = pyz
    c[:, 1, 0] = pzx
    c[:, 1, 2] = -pzx
    c[:, 2, 0] = -pxy
    c[:, 2, 1] = pxy
    return c


def build_problem(trace: SimTrace, tau_ext_known: bool = True,
                  pairing: str = "window",
                  lower_bound: float = DEFAULT_LOWER_BOUND) -> LsProblem:
    """Assemble the stacked regression from one trace.

    h_rw and hdot_rw come from the measured wheel speeds and the logged
    applied torques; tau_ext is taken from the trace log when known,
    otherwise zero.
    """
    if pairing not in ("window", "sample"):
        raise ValueError(f"unknown pairing {pairing!r}")
    n = trace.n_samples
    if n < 3:
        raise ValueError("trace too short for central differences")
    dt = trace.dt_ctrl
    om = trace.omega_meas
    h_rw = trace.params.rw_inertia * trace.wheel_speed_meas
    tau_ext = trace.tau_ext if tau_ext_known else np.zeros_like(trace.tau_ext)

    wdot = finite_diff_omega_dot(om, dt)             # (M, 3), M = n - 2
    cross_coef = _cross_coefficients(om)             # (n, 3, 3)
    gyro_term = np.cross(om, h_rw)                   # (n, 3)

    if pairing == "sample":
        c = cross_coef[1:-1]
        rhs = -gyro_term[1:-1] - trace.tau_applied[1:-1] + tau_ext[1:-1]
    else:
        # Simpson average over the central-difference support [k-1, k+1];
        # the wheel torque is constant per control interval, so its exact
        # window mean is the two-interval average.
        c = (cross_coef[:-2] + 4.0 * cross_coef[1:-1] + cross_coef[2:]) / 6.0
        gyro = (gyro_term[:-2] + 4.0 * gyro_term[1:-1] + gyro_term[2:]) / 6.0
        hdot = 0.5 * (trace.tau_applied[:-2] + trace.tau_applied[1:-1])
        text = (tau_ext[:-2] + 4.0 * tau_ext[1:-1] + tau_ext[2:]) / 6.0
        rhs = -gyro - hdot + text

    m = wdot.shape[0]
    a = c.copy()
    idx = np.arange(3)
    a[:, idx, idx] += wdot
    a = a.reshape(3 * m, 3)
    b = rhs.reshape(3 * m)

    sv = np.linalg.svd(a, compute_uv=False)
    cond = float(sv[0] / sv[-1]) if sv[-1] > 0 else float("inf")
    return LsProblem(a=a, b=b, lower=np.full(3, lower_bound),
                     condition_number=cond, n_samples=m, pairing=pairing)


def solve(problem: LsProblem) -> EstimateResult:
    """Exact bound-constrained linear least squares (active set on 3 vars).

    A condition number above 1e12 flags the result degenerate; the estimate
    is still returned.
    """
    a, b, lower = problem.a, problem.b, problem.lower
    theta, *_ = np.linalg.lstsq(a, b, rcond=None)
    if np.any(theta < lower):
        theta = _solve_bounded(a, b, lower)
    return EstimateResult(
        inertia_hat=theta,
        method="ls",
        condition_number=problem.condition_number,
        degenerate=not np.isfinite(problem.condition_number)
        or problem.condition_number > DEGENERATE_CONDITION,
    )


def _solve_bounded(a: np.ndarray, b: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """Enumerate active sets (8 for 3 parameters) and keep the feasible
    candidate with the smallest residual; the optimum's active set is among
    them, so this returns the exact constrained minimizer."""
    best = None
    best_cost = np.inf
    for mask in range(8):
        fixed = [i for i in range(3) if mask & (1 << i)]
        free = [i for i in range(3) if i not in fixed]
        theta = lower.astype(float).copy()
        if free:
            rhs = b - a[:, fixed] @ lower[fixed] if fixed else b
            sol, *_ = np.linalg.lstsq(a[:, free], rhs, rcond=None)
            theta[free] = sol
        if np.any(theta[free] < lower[free] - 1e-15):
            continue
        cost = float(np.sum((a @ theta - b) ** 2))
        if cost < best_cost:
            best_cost = cost
            best = theta
    return best if best is not None else lower.astype(float)
