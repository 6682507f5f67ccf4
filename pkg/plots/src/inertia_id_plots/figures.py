"""Figure builders over the inertia-id CSV schemas.

Each builder takes parsed CSV rows and returns a matplotlib Figure; the CLI
层 only saves them. Bar heights are taken verbatim from the CSV (no
re-aggregation here), so the numbers in a figure always match the file it
was drawn from. Rendering is read-only and deterministic: fixed figure
sizes, no timestamps.
"""

from __future__ import annotations

import csv
import os

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

__all__ = ["PlotInputError", "read_csv_rows", "load_profile_dir",
           "static_bars", "dynamic_bars", "tracking_trace", "profile_gallery"]

STATIC_MODE = "static"
DYNAMIC_MODES = ("step", "drift", "periodic")

SUMMARY_COLUMNS = ("satellite", "profile", "inertia_mode", "estimator",
                   "mean_error_pct", "std_error_pct")
TRACE_COLUMNS = ("t", "Ix", "Iy", "Iz")
ESTIMATE_COLUMNS = ("t", "Ix_hat", "Iy_hat", "Iz_hat")
PROFILE_COLUMNS = ("t", "tau_x", "tau_y", "tau_z")

_BAR_COLORS = {"ls": "#4878a8", "ekf": "#d1605e"}
_AXIS_COLORS = ("#4878a8", "#d1605e", "#6aa56a")


class PlotInputError(Exception):
    """Unusable input file: missing, empty, or lacking a required column."""


def read_csv_rows(path, required: tuple[str, ...]) -> list[dict]:
    """Load a CSV and verify the named columns exist and rows are present."""
    try:
        with open(path, newline="") as fh:
            reader = csv.DictReader(fh)
            header = reader.fieldnames or []
            for column in required:
                if column not in header:
                    raise PlotInputError(
                        f"{path}: missing required column {column!r} "
                        f"(found: {', '.join(header) or 'nothing'})")
            rows = list(reader)
    except OSError as exc:
        raise PlotInputError(f"cannot read {path}: {exc}") from exc
    if not rows:
        raise PlotInputError(f"{path}: no data rows")
    return rows


def _column(rows: list[dict], name: str) -> np.ndarray:
    try:
        return np.array([float(r[name]) for r in rows])
    except ValueError as exc:
        raise PlotInputError(f"column {name!r}: non-numeric value ({exc})") from exc


def _ordered_unique(values):
    seen = {}
    for v in values:
        seen.setdefault(v, None)
    return list(seen)


def _grouped_bars(ax, rows, profiles, estimators):
    """One panel of mean +- std bars, grouped by profile."""
    width = 0.8 / max(1, len(estimators))
    for j, est in enumerate(estimators):
        means, stds, x = [], [], []
        for i, prof in enumerate(profiles):
            row = next((r for r in rows
                        if r["profile"] == prof and r["estimator"] == est), None)
            if row is None:
                continue
            means.append(float(row["mean_error_pct"]))
            stds.append(float(row["std_error_pct"]))
            x.append(i + (j - (len(estimators) - 1) / 2.0) * width)
        ax.bar(x, means, width=width, yerr=stds, capsize=2,
               label=est.upper(), color=_BAR_COLORS.get(est))
    ax.set_xticks(range(len(profiles)))
    ax.set_xticklabels(profiles, rotation=45, ha="right", fontsize=8)
    ax.set_ylabel("error [%]")
    ax.grid(axis="y", alpha=0.3)


def static_bars(summary_rows: list[dict], group_by: str = "satellite"):
    """Mean/std error bars for the static-inertia cells, one panel per group."""
    if group_by not in SUMMARY_COLUMNS:
        raise PlotInputError(f"cannot group by {group_by!r}")
    rows = [r for r in summary_rows if r["inertia_mode"] == STATIC_MODE]
    if not rows:
        raise PlotInputError("summary holds no static-mode rows")
    groups = _ordered_unique(r[group_by] for r in rows)
    estimators = _ordered_unique(r["estimator"] for r in rows)
    fig, axes = plt.subplots(1, len(groups), figsize=(4.0 * len(groups), 3.2),
                             sharey=True, squeeze=False)
    for ax, group in zip(axes[0], groups):
        panel = [r for r in rows if r[group_by] == group]
        profiles = _ordered_unique(r["profile"] for r in panel)
        _grouped_bars(ax, panel, profiles, estimators)
        ax.set_title(group)
    axes[0][0].legend(fontsize=8)
    fig.suptitle("Static inertia: estimation error by excitation profile")
    fig.tight_layout()
    return fig


def dynamic_bars(summary_rows: list[dict]):
    """Error bars for the dynamic modes: mode rows x satellite columns."""
    rows = [r for r in summary_rows if r["inertia_mode"] in DYNAMIC_MODES]
    if not rows:
        raise PlotInputError("summary holds no dynamic-mode rows")
    modes = [m for m in DYNAMIC_MODES
             if any(r["inertia_mode"] == m for r in rows)]
    satellites = _ordered_unique(r["satellite"] for r in rows)
    estimators = _ordered_unique(r["estimator"] for r in rows)
    fig, axes = plt.subplots(len(modes), len(satellites),
                             figsize=(4.0 * len(satellites), 2.6 * len(modes)),
                             sharey="row", squeeze=False)
    for i, mode in enumerate(modes):
        for j, sat in enumerate(satellites):
            panel = [r for r in rows
                     if r["inertia_mode"] == mode and r["satellite"] == sat]
            profiles = _ordered_unique(r["profile"] for r in panel)
            ax = axes[i][j]
            _grouped_bars(ax, panel, profiles, estimators)
            if i == 0:
                ax.set_title(sat)
            if j == 0:
                ax.set_ylabel(f"{mode}\nerror [%]")
    axes[0][0].legend(fontsize=8)
    fig.suptitle("Time-varying inertia: estimation error by mode and profile")
    fig.tight_layout()
    return fig


def tracking_trace(trace_rows: list[dict], estimate_rows: list[dict]):
    """Per-axis overlay of the true inertia and the filter estimate."""
    t_true = _column(trace_rows, "t")
    t_est = _column(estimate_rows, "t")
    fig, axes = plt.subplots(3, 1, figsize=(8.0, 6.0), sharex=True)
    for i, axis_name in enumerate(("x", "y", "z")):
        truth = _column(trace_rows, f"I{axis_name}")
        est = _column(estimate_rows, f"I{axis_name}_hat")
        ax = axes[i]
        ax.plot(t_true, truth, color="black", lw=1.2, label="truth")
        ax.plot(t_est, est, color=_AXIS_COLORS[i], lw=1.0, label="estimate")
        var_col = f"var_I{axis_name}"
        if estimate_rows and estimate_rows[0].get(var_col):
            sigma = np.sqrt(_column(estimate_rows, var_col))
            ax.fill_between(t_est, est - sigma, est + sigma,
                            color=_AXIS_COLORS[i], alpha=0.2, lw=0)
        ax.set_ylabel(f"I{axis_name} [kg m$^2$]")
        ax.grid(alpha=0.3)
    axes[0].legend(fontsize=8, loc="upper right")
    axes[2].set_xlabel("t [s]")
    fig.suptitle("Inertia tracking against ground truth")
    fig.tight_layout()
    return fig


def load_profile_dir(path) -> list[tuple[str, list[dict]]]:
    """All profile CSVs of a directory (or a single file), name-sorted."""
    if os.path.isdir(path):
        names = sorted(n for n in os.listdir(path) if n.endswith(".csv"))
        if not names:
            raise PlotInputError(f"{path}: no CSV files")
        return [(os.path.splitext(n)[0],
                 read_csv_rows(os.path.join(path, n), PROFILE_COLUMNS))
                for n in names]
    return [(os.path.splitext(os.path.basename(path))[0],
             read_csv_rows(path, PROFILE_COLUMNS))]


def profile_gallery(profiles: list[tuple[str, list[dict]]]):
    """Grid of per-axis torque traces, one panel per profile."""
    if not profiles:
        raise PlotInputError("no profiles to draw")
    cols = 2 if len(profiles) > 1 else 1
    rows_n = (len(profiles) + cols - 1) // cols
    fig, axes = plt.subplots(rows_n, cols, figsize=(5.0 * cols, 1.9 * rows_n),
                             sharex=True, squeeze=False)
    flat = [ax for row in axes for ax in row]
    for ax, (name, rows) in zip(flat, profiles):
        t = _column(rows, "t")
        for i, col in enumerate(("tau_x", "tau_y", "tau_z")):
            ax.plot(t, _column(rows, col), lw=0.7, color=_AXIS_COLORS[i])
        ax.set_title(name, fontsize=9)
        ax.grid(alpha=0.3)
    for ax in flat[len(profiles):]:
        ax.set_visible(False)
    fig.suptitle("Commanded torque profiles [N m]")
    fig.tight_layout()
    return fig
