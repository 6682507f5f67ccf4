"""Estimation-error metrics and per-seed aggregation."""

from __future__ import annotations

import math

import numpy as np

__all__ = ["normalized_error", "sliding_window_error", "aggregate"]


def normalized_error(i_hat: np.ndarray, i_true: np.ndarray) -> float:
    """||i_hat - i_true|| / ||i_true|| (dimensionless fraction)."""
    i_true = np.asarray(i_true, dtype=float)
    denom = float(np.linalg.norm(i_true))
    if denom == 0.0:
        raise ValueError("true inertia must be non-zero")
    return float(np.linalg.norm(np.asarray(i_hat, dtype=float) - i_true) / denom)


def sliding_window_error(i_hat_series: np.ndarray, i_true_series: np.ndarray,
                         window_fraction: float = 0.2) -> float:
    """Mean normalized error against the instantaneous truth over the final
    window (last ceil(window_fraction * N) samples).

    A constant estimate (e.g. batch LS under time-varying truth) can be
    passed broadcast to the series shape.
    """
    i_hat_series = np.atleast_2d(np.asarray(i_hat_series, dtype=float))
    i_true_series = np.atleast_2d(np.asarray(i_true_series, dtype=float))
    if i_hat_series.shape[0] == 1 and i_true_series.shape[0] > 1:
        i_hat_series = np.broadcast_to(i_hat_series, i_true_series.shape)
    if i_hat_series.shape != i_true_series.shape or i_true_series.size == 0:
        raise ValueError("series must be non-empty and aligned")
    n = i_true_series.shape[0]
    k = max(1, math.ceil(window_fraction * n))
    hat = i_hat_series[n - k:]
    true = i_true_series[n - k:]
    errs = np.linalg.norm(hat - true, axis=1) / np.linalg.norm(true, axis=1)
    return float(np.mean(errs))


def aggregate(per_seed: list[float]) -> tuple[float, float]:
    """Arithmetic mean and sample standard deviation (n-1; zero for n=1)."""
    if len(per_seed) == 0:
        raise ValueError("empty per-seed list")
    arr = np.asarray(per_seed, dtype=float)
    mean = float(arr.mean())
    std = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    return mean, std
