"""Experiment orchestration: the run grid, aggregation, and CSV persistence.

A grid cell is one (satellite, profile, inertia mode); each cell is simulated
once per seed and scored by every requested estimator. The per-run seed is a
stable hash of (base seed, satellite, profile, mode, seed index), so
subsetting the grid never changes the records of the remaining cells. Runs
are embarrassingly parallel; records are sorted into canonical grid order
before writing so parallel execution never changes the output.
"""

from __future__ import annotations

import csv
import hashlib
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import ekf as ekf_mod
from . import leastsq
from .dynamics import SimTrace, simulate
from .excitation import ExcitationProfile, ProfileKind, generate
from .metrics import aggregate, normalized_error, sliding_window_error
from .params import SATELLITES, DisturbanceParams, InertiaMode, InertiaSchedule
from .results import EstimateResult
from .sensors import SensorConfig

__all__ = ["ExperimentConfig", "RunRecord", "default_sensor_config",
           "run_single", "run_grid", "summarize", "horizon_sweep",
           "write_results_csv", "write_summary_csv", "write_sweep_csv",
           "write_trace_csv", "write_ekf_trajectory_csv", "derive_run_seed"]

DEFAULT_BASE_SEED = 42
SEED_ENV_VAR = "INERTIA_ID_SEED"
WINDOW_FRACTION = 0.2

ALL_PROFILES = tuple(k.value for k in ProfileKind)
ALL_MODES = tuple(m.value for m in InertiaMode)
ALL_ESTIMATORS = ("ls", "ekf")

RESULTS_HEADER = ["satellite", "profile", "inertia_mode", "estimator",
                  "seed", "error", "cond_number", "wall_time_s"]
TRACE_HEADER = ["t", "wx", "wy", "wz", "wx_meas", "wy_meas", "wz_meas",
                "rw1", "rw2", "rw3", "tau_cmd_x", "tau_cmd_y", "tau_cmd_z",
                "tau_app_x", "tau_app_y", "tau_app_z",
                "text_x", "text_y", "text_z", "Ix", "Iy", "Iz"]


def default_sensor_config(params) -> SensorConfig:
    """Stock noise levels for one satellite.

    The gyro sigma is matched to the vehicle's angular-acceleration scale
    (tau_max / mean inertia) so the measurement SNR, and hence the relative
    LS/EKF error regime, is comparable across satellite sizes; a fixed
    absolute sigma would leave the largest satellite noise-dominated.
    """
    scale = params.rw_max_torque / float(np.mean(params.inertia))
    return SensorConfig(gyro_noise_std=0.01 * scale, wheel_speed_noise_std=0.1)


@dataclass(frozen=True)
class ExperimentConfig:
    """Full description of one experiment grid."""

    satellites: tuple[str, ...] = tuple(SATELLITES)
    profiles: tuple[str, ...] = ALL_PROFILES
    modes: tuple[str, ...] = ALL_MODES
    estimators: tuple[str, ...] = ALL_ESTIMATORS
    seeds: int = 10
    horizon: float = 300.0
    dt_ctrl: float = 0.1
    base_seed: int = DEFAULT_BASE_SEED
    noise: bool = True
    disturbance: bool = True
    gyro_noise_std: float | None = None      # None = per-satellite default
    wheel_speed_noise_std: float = 0.1
    workers: int = 0                          # 0 = one per CPU
    export_traces: bool = False
    out_dir: str = "results"

    def __post_init__(self):
        if self.horizon <= 0 or self.dt_ctrl <= 0 or self.seeds < 1:
            raise ValueError("horizon, dt_ctrl and seeds must be positive")
        for group, valid in ((self.satellites, SATELLITES),
                             (self.profiles, ALL_PROFILES),
                             (self.modes, ALL_MODES),
                             (self.estimators, ALL_ESTIMATORS)):
            if not group:
                raise ValueError("every grid dimension needs at least one entry")
            for name in group:
                if name not in valid:
                    raise ValueError(f"unknown grid entry {name!r}")

    def sensor_config(self, params) -> SensorConfig:
        if not self.noise:
            return SensorConfig.noiseless()
        if self.gyro_noise_std is None:
            base = default_sensor_config(params)
            return replace(base, wheel_speed_noise_std=self.wheel_speed_noise_std)
        return SensorConfig(gyro_noise_std=self.gyro_noise_std,
                            wheel_speed_noise_std=self.wheel_speed_noise_std)

    def disturbance_params(self) -> DisturbanceParams:
        return DisturbanceParams() if self.disturbance else DisturbanceParams.disabled()


@dataclass
class RunRecord:
    """One grid cell x seed x estimator outcome."""

    satellite: str
    profile: str
    inertia_mode: str
    estimator: str
    seed: int
    error: float | None
    cond_number: float | None
    wall_time_s: float
    failed: bool = False


def derive_run_seed(base_seed: int, satellite: str, profile: str, mode: str,
                    seed_index: int) -> int:
    """Stable 63-bit per-run seed; independent of grid composition."""
    text = f"{base_seed}|{satellite}|{profile}|{mode}|{seed_index}"
    digest = hashlib.sha256(text.encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _schedule_for(mode: str, params, horizon: float) -> InertiaSchedule:
    return InertiaSchedule(InertiaMode.from_name(mode), params.inertia_nominal,
                           horizon)


def _score(result: EstimateResult, trace: SimTrace, mode: str) -> float:
    if mode == InertiaMode.STATIC.value:
        return normalized_error(result.inertia_hat, trace.inertia_true[-1])
    if result.trajectory is not None:
        series = result.trajectory
    else:
        series = result.inertia_hat[None, :]
    return sliding_window_error(series, trace.inertia_true, WINDOW_FRACTION)


def run_single(cfg: ExperimentConfig, satellite: str, profile_name: str,
               mode: str, seed_index: int, estimator: str,
               trace: SimTrace | None = None) -> RunRecord:
    """Execute one run; pass a prebuilt trace to skip re-simulation."""
    t0 = time.perf_counter()
    params = SATELLITES[satellite]
    try:
        if trace is None:
            trace = _make_trace(cfg, satellite, profile_name, mode, seed_index)
        result = _estimate(cfg, trace, estimator)
        error = _score(result, trace, mode)
        cond = result.condition_number
        return RunRecord(satellite, profile_name, mode, estimator, seed_index,
                         error, cond, time.perf_counter() - t0)
    except (FloatingPointError, np.linalg.LinAlgError, ValueError):
        return RunRecord(satellite, profile_name, mode, estimator, seed_index,
                         None, None, time.perf_counter() - t0, failed=True)


def _make_trace(cfg: ExperimentConfig, satellite: str, profile_name: str,
                mode: str, seed_index: int,
                profile: ExcitationProfile | None = None,
                truth_cache: dict | None = None) -> SimTrace:
    params = SATELLITES[satellite]
    run_seed = derive_run_seed(cfg.base_seed, satellite, profile_name, mode,
                               seed_index)
    if profile is None:
        profile = generate(ProfileKind.from_name(profile_name), cfg.horizon,
                           cfg.dt_ctrl, params.rw_max_torque, seed=run_seed)
    return simulate(params, _schedule_for(mode, params, cfg.horizon), profile,
                    cfg.disturbance_params(), cfg.sensor_config(params),
                    run_seed, _truth_cache=truth_cache)


def _estimate(cfg: ExperimentConfig, trace: SimTrace, estimator: str
              ) -> EstimateResult:
    if estimator == "ls":
        return leastsq.solve(leastsq.build_problem(trace))
    if estimator == "ekf":
        sensor = cfg.sensor_config(trace.params)
        ekf_cfg = ekf_mod.default_config(trace.params, sensor, dt=trace.dt_ctrl,
                                         omega0=trace.omega_meas[0],
                                         wheel0=trace.wheel_speed_meas[0])
        return ekf_mod.run_filter(trace, ekf_cfg, collect_covariance=True)
    raise ValueError(f"unknown estimator {estimator!r}")


def _run_cell(args) -> list[tuple]:
    """All records of one (satellite, profile, mode) cell, plus exports."""
    cfg, satellite, profile_name, mode = args
    params = SATELLITES[satellite]
    kind = ProfileKind.from_name(profile_name)
    # only PRBS realizations depend on the seed; every other kind can share
    # one profile object per cell so the noise-free truth is integrated once
    shared_profile = None
    if kind is not ProfileKind.PRBS:
        shared_profile = generate(kind, cfg.horizon, cfg.dt_ctrl,
                                  params.rw_max_torque,
                                  seed=derive_run_seed(cfg.base_seed, satellite,
                                                       profile_name, mode, 0))
    truth_cache: dict = {}
    records = []
    for seed_index in range(cfg.seeds):
        t_trace = time.perf_counter()
        try:
            trace = _make_trace(cfg, satellite, profile_name, mode, seed_index,
                                profile=shared_profile, truth_cache=truth_cache)
        except (FloatingPointError, ValueError):
            for estimator in cfg.estimators:
                records.append(RunRecord(satellite, profile_name, mode,
                                         estimator, seed_index, None, None,
                                         time.perf_counter() - t_trace,
                                         failed=True))
            continue
        trace_time = time.perf_counter() - t_trace
        if cfg.export_traces:
            _export_run(cfg, trace, satellite, profile_name, mode, seed_index)
        for estimator in cfg.estimators:
            t0 = time.perf_counter()
            try:
                result = _estimate(cfg, trace, estimator)
                error = _score(result, trace, mode)
                rec = RunRecord(satellite, profile_name, mode, estimator,
                                seed_index, error, result.condition_number,
                                trace_time + time.perf_counter() - t0)
                if cfg.export_traces and estimator == "ekf":
                    _export_ekf(cfg, result, trace, satellite, profile_name,
                                mode, seed_index)
            except (FloatingPointError, np.linalg.LinAlgError, ValueError):
                rec = RunRecord(satellite, profile_name, mode, estimator,
                                seed_index, None, None,
                                trace_time + time.perf_counter() - t0,
                                failed=True)
            records.append(rec)
    return records


def _export_run(cfg, trace, satellite, profile_name, mode, seed_index):
    os.makedirs(cfg.out_dir, exist_ok=True)
    name = f"trace_{satellite}_{profile_name}_{mode}_seed{seed_index}.csv"
    write_trace_csv(trace, os.path.join(cfg.out_dir, name))


def _export_ekf(cfg, result, trace, satellite, profile_name, mode, seed_index):
    name = f"ekf_{satellite}_{profile_name}_{mode}_seed{seed_index}.csv"
    write_ekf_trajectory_csv(result, trace, os.path.join(cfg.out_dir, name))


def run_grid(cfg: ExperimentConfig) -> list[RunRecord]:
    """Execute the full grid; records come back in canonical grid order."""
    cells = [(cfg, s, p, m) for s in cfg.satellites for p in cfg.profiles
             for m in cfg.modes]
    workers = cfg.workers if cfg.workers > 0 else (os.cpu_count() or 1)
    workers = min(workers, len(cells))
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_run_cell, cells))
    else:
        chunks = [_run_cell(c) for c in cells]

    order = {
        key: i for i, key in enumerate(
            (s, p, m, e, k)
            for s in cfg.satellites for p in cfg.profiles for m in cfg.modes
            for e in cfg.estimators for k in range(cfg.seeds))
    }
    records = [r for chunk in chunks for r in chunk]
    records.sort(key=lambda r: order[(r.satellite, r.profile, r.inertia_mode,
                                      r.estimator, r.seed)])
    return records


def summarize(records: list[RunRecord]) -> list[dict]:
    """Per-cell mean/std (in percent) with a best-estimator flag."""
    if not records:
        raise ValueError("no records to summarize")
    groups: dict[tuple, list[float]] = {}
    group_order: list[tuple] = []
    for r in records:
        key = (r.satellite, r.profile, r.inertia_mode, r.estimator)
        if key not in groups:
            groups[key] = []
            group_order.append(key)
        if not r.failed and r.error is not None:
            groups[key].append(r.error)

    rows = []
    for key in group_order:
        errs = groups[key]
        if errs:
            mean, std = aggregate(errs)
        else:
            mean, std = float("nan"), float("nan")
        rows.append({"satellite": key[0], "profile": key[1],
                     "inertia_mode": key[2], "estimator": key[3],
                     "mean_error_pct": 100.0 * mean,
                     "std_error_pct": 100.0 * std,
                     "n_seeds": len(errs), "best": 0})

    by_cell: dict[tuple, list[dict]] = {}
    for row in rows:
        by_cell.setdefault((row["satellite"], row["profile"],
                            row["inertia_mode"]), []).append(row)
    for cell_rows in by_cell.values():
        finite = [r for r in cell_rows if np.isfinite(r["mean_error_pct"])]
        if finite:
            min(finite, key=lambda r: r["mean_error_pct"])["best"] = 1
    return rows


def horizon_sweep(cfg: ExperimentConfig, durations: list[float]) -> list[dict]:
    """Static-mode grid rerun per duration; mean/std per estimator,
    aggregated over satellites, profiles, and seeds."""
    if not durations or any(d <= 0 for d in durations):
        raise ValueError("durations must be positive")
    if sorted(durations) != list(durations):
        raise ValueError("durations must be ascending")
    rows = []
    for duration in durations:
        sub = replace(cfg, modes=(InertiaMode.STATIC.value,), horizon=duration)
        records = run_grid(sub)
        for estimator in cfg.estimators:
            errs = [r.error for r in records
                    if r.estimator == estimator and not r.failed]
            mean, std = aggregate(errs) if errs else (float("nan"), float("nan"))
            rows.append({"duration_s": duration, "estimator": estimator,
                         "mean_error_pct": 100.0 * mean,
                         "std_error_pct": 100.0 * std, "n_runs": len(errs)})
    return rows


# --------------------------------------------------------------------------
# CSV persistence (RFC 4180, LF line endings, 17 significant digits)
# --------------------------------------------------------------------------

def _fmt(x) -> str:
    if x is None:
        return ""
    return f"{x:.17g}"


def write_results_csv(records: list[RunRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(RESULTS_HEADER)
        for r in records:
            writer.writerow([r.satellite, r.profile, r.inertia_mode,
                             r.estimator, r.seed, _fmt(r.error),
                             _fmt(r.cond_number), _fmt(r.wall_time_s)])


def write_summary_csv(rows: list[dict], path) -> None:
    header = ["satellite", "profile", "inertia_mode", "estimator",
              "mean_error_pct", "std_error_pct", "n_seeds", "best"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([row["satellite"], row["profile"],
                             row["inertia_mode"], row["estimator"],
                             _fmt(row["mean_error_pct"]),
                             _fmt(row["std_error_pct"]),
                             row["n_seeds"], row["best"]])


def write_sweep_csv(rows: list[dict], path) -> None:
    header = ["duration_s", "estimator", "mean_error_pct", "std_error_pct",
              "n_runs"]
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_fmt(row["duration_s"]), row["estimator"],
                             _fmt(row["mean_error_pct"]),
                             _fmt(row["std_error_pct"]), row["n_runs"]])


def write_trace_csv(trace: SimTrace, path) -> None:
    """Per-run trace export; rw1..rw3 are the measured wheel speeds, which
    together with the measured rates, applied torques, and logged external
    torque are exactly the estimator inputs (runs can be re-scored from the
    file alone)."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for k in range(trace.n_samples):
            row = ([trace.t[k]] + list(trace.omega[k])
                   + list(trace.omega_meas[k]) + list(trace.wheel_speed_meas[k])
                   + list(trace.tau_cmd[k]) + list(trace.tau_applied[k])
                   + list(trace.tau_ext[k]) + list(trace.inertia_true[k]))
            writer.writerow([_fmt(v) for v in row])


def write_ekf_trajectory_csv(result: EstimateResult, trace: SimTrace, path) -> None:
    """Filter inertia-estimate trajectory (for tracking figures)."""
    traj = result.trajectory
    cov = result.trajectory_cov
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "Ix_hat", "Iy_hat", "Iz_hat",
                         "var_Ix", "var_Iy", "var_Iz"])
        for k in range(traj.shape[0]):
            row = [trace.t[k]] + list(traj[k])
            row += list(cov[k]) if cov is not None else ["", "", ""]
            writer.writerow([_fmt(v) if v != "" else "" for v in row])
