"""Shared estimator output container."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = ["EstimateResult"]


@dataclass
class EstimateResult:
    """Inertia estimate plus method-specific diagnostics.

    For batch LS only the final vector and the regressor condition number
    are meaningful; the filter additionally carries the full estimate
    trajectory and covariance diagonals.
    """

    inertia_hat: np.ndarray                 # (3,) kg m^2
    method: str                             # "ls" | "ekf"
    condition_number: float | None = None   # LS regressor conditioning
    degenerate: bool = False                # LS: rank-deficient regressor
    covariance_diag: np.ndarray | None = None   # EKF: final diag(P) (9,)
    trajectory: np.ndarray | None = None        # EKF: (N, 3) inertia estimates
    trajectory_cov: np.ndarray | None = None    # EKF: (N, 3) inertia covariance diag
