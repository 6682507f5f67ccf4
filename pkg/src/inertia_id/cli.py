"""Command-line front end.

Subcommands:
  run           full or subset experiment grid -> results.csv + summary.csv
  sweep         static-mode horizon sweep -> sweep.csv
  summarize     aggregate an existing results.csv
  profile-dump  write one excitation profile as t,tau_x,tau_y,tau_z rows

Exit codes: 0 success, 1 configuration error, 2 one or more failed runs.
The base seed comes from --base-seed, the config file, or the
INERTIA_ID_SEED environment variable (default 42), in that order.
"""

from __future__ import annotations

import argparse
import os
import sys

from .excitation import ProfileKind, generate, profile_to_csv
from .harness import (ALL_ESTIMATORS, ALL_MODES, ALL_PROFILES,
                      DEFAULT_BASE_SEED, SEED_ENV_VAR, ExperimentConfig,
                      horizon_sweep, run_grid, summarize, write_results_csv,
                      write_summary_csv, write_sweep_csv)
from .params import SATELLITES


class ConfigError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse exits with status 2 on bad flags; this artifact reserves 2
    for failed runs, so usage errors are remapped to exit code 1."""

    def error(self, message):
        self.exit(1, f"{self.prog}: error: {message}\n")


def parse_config_file(path: str) -> dict[str, list[str]]:
    """Flat key=value file; repeated keys form lists; '#' starts a comment."""
    values: dict[str, list[str]] = {}
    try:
        with open(path) as fh:
            for lineno, raw in enumerate(fh, 1):
                line = raw.split("#", 1)[0].strip()
                if not line:
                    continue
                if "=" not in line:
                    raise ConfigError(f"{path}:{lineno}: expected key=value")
                key, _, value = line.partition("=")
                values.setdefault(key.strip().lower(), []).append(value.strip())
    except OSError as exc:
        raise ConfigError(f"cannot read config file: {exc}") from exc
    return values


def _as_bool(text: str, key: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"config key {key!r}: expected a boolean, got {text!r}")


def _base_seed_default() -> int:
    raw = os.environ.get(SEED_ENV_VAR)
    if raw is None:
        return DEFAULT_BASE_SEED
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {raw!r}") from exc


def build_experiment_config(args) -> ExperimentConfig:
    """Merge precedence: CLI flags > config file > environment > defaults."""
    file_vals = parse_config_file(args.config) if args.config else {}

    def pick_list(flag_val, key, default):
        if flag_val:
            return tuple(flag_val)
        if key in file_vals:
            return tuple(file_vals[key])
        return default

    def pick_scalar(flag_val, key, default, cast):
        if flag_val is not None:
            return flag_val
        if key in file_vals:
            try:
                return cast(file_vals[key][-1])
            except ValueError as exc:
                raise ConfigError(f"config key {key!r}: {exc}") from exc
        return default

    noise = not args.no_noise if args.no_noise else None
    if noise is None and "noise" in file_vals:
        noise = _as_bool(file_vals["noise"][-1], "noise")
    disturbance = not args.no_disturbance if args.no_disturbance else None
    if disturbance is None and "disturbance" in file_vals:
        disturbance = _as_bool(file_vals["disturbance"][-1], "disturbance")
    export = args.export_traces or (
        "export_traces" in file_vals
        and _as_bool(file_vals["export_traces"][-1], "export_traces"))

    try:
        return ExperimentConfig(
            satellites=pick_list(args.satellite, "satellite", tuple(SATELLITES)),
            profiles=pick_list(args.profile, "profile", ALL_PROFILES),
            modes=pick_list(args.mode, "mode", ALL_MODES),
            estimators=pick_list(args.estimator, "estimator", ALL_ESTIMATORS),
            seeds=pick_scalar(args.seeds, "seeds", 10, int),
            horizon=pick_scalar(args.horizon, "horizon", 300.0, float),
            dt_ctrl=pick_scalar(None, "dt_ctrl", 0.1, float),
            base_seed=pick_scalar(args.base_seed, "base_seed",
                                  _base_seed_default(), int),
            noise=True if noise is None else noise,
            disturbance=True if disturbance is None else disturbance,
            gyro_noise_std=pick_scalar(args.gyro_noise, "gyro_noise_std",
                                       None, float),
            wheel_speed_noise_std=pick_scalar(args.wheel_noise,
                                              "wheel_speed_noise_std", 0.1,
                                              float),
            workers=pick_scalar(args.workers, "workers", 0, int),
            export_traces=export,
            out_dir=pick_scalar(args.out, "out", "results", str),
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _add_grid_flags(sub):
    sub.add_argument("--config", help="flat key=value config file")
    sub.add_argument("--out", help="output directory (default: results)")
    sub.add_argument("--satellite", action="append",
                     help="repeatable; default: all three presets")
    sub.add_argument("--profile", action="append",
                     help="repeatable; default: all eight kinds")
    sub.add_argument("--mode", action="append",
                     help="repeatable; default: static,step,drift,periodic")
    sub.add_argument("--estimator", action="append",
                     help="repeatable; default: ls,ekf")
    sub.add_argument("--seeds", type=int, help="seeds per cell (default 10)")
    sub.add_argument("--horizon", type=float, help="episode length [s]")
    sub.add_argument("--base-seed", type=int, help="base seed")
    sub.add_argument("--gyro-noise", type=float,
                     help="absolute gyro sigma [rad/s]; default scales per satellite")
    sub.add_argument("--wheel-noise", type=float,
                     help="tachometer sigma [rad/s] (default 0.1)")
    sub.add_argument("--no-noise", action="store_true")
    sub.add_argument("--no-disturbance", action="store_true")
    sub.add_argument("--export-traces", action="store_true")
    sub.add_argument("--workers", type=int, help="parallel workers (0 = auto)")


def main(argv=None) -> int:
    parser = _Parser(prog="inertia-id",
                     description="Torque-excitation study for spacecraft "
                                 "inertia identification")
    subs = parser.add_subparsers(dest="command", required=True)

    p_run = subs.add_parser("run", help="execute an experiment grid")
    _add_grid_flags(p_run)

    p_sweep = subs.add_parser("sweep", help="horizon sweep (static mode)")
    _add_grid_flags(p_sweep)
    p_sweep.add_argument("--durations", required=True,
                         help="comma-separated ascending durations [s]")

    p_sum = subs.add_parser("summarize", help="aggregate a results CSV")
    p_sum.add_argument("--in", dest="infile", required=True)
    p_sum.add_argument("--out", dest="outfile", required=True)

    p_dump = subs.add_parser("profile-dump", help="export one profile as CSV")
    p_dump.add_argument("--kind", required=True)
    p_dump.add_argument("--out", dest="outfile", required=True)
    p_dump.add_argument("--horizon", type=float, default=300.0)
    p_dump.add_argument("--dt", type=float, default=0.1)
    p_dump.add_argument("--tau-max", type=float, default=1.0)
    p_dump.add_argument("--seed", type=int, default=DEFAULT_BASE_SEED)

    args = parser.parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "summarize":
            return _cmd_summarize(args)
        return _cmd_profile_dump(args)
    except ConfigError as exc:
        print(f"inertia-id: config error: {exc}", file=sys.stderr)
        return 1


def _cmd_run(args) -> int:
    cfg = build_experiment_config(args)
    os.makedirs(cfg.out_dir, exist_ok=True)
    records = run_grid(cfg)
    write_results_csv(records, os.path.join(cfg.out_dir, "results.csv"))
    write_summary_csv(summarize(records), os.path.join(cfg.out_dir, "summary.csv"))
    n_failed = sum(r.failed for r in records)
    print(f"{len(records)} runs, {n_failed} failed -> {cfg.out_dir}/results.csv")
    return 2 if n_failed else 0


def _cmd_sweep(args) -> int:
    cfg = build_experiment_config(args)
    try:
        durations = [float(v) for v in args.durations.split(",") if v.strip()]
    except ValueError as exc:
        raise ConfigError(f"--durations: {exc}") from exc
    if not durations:
        raise ConfigError("--durations: empty list")
    os.makedirs(cfg.out_dir, exist_ok=True)
    try:
        rows = horizon_sweep(cfg, durations)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    write_sweep_csv(rows, os.path.join(cfg.out_dir, "sweep.csv"))
    print(f"{len(rows)} sweep rows -> {cfg.out_dir}/sweep.csv")
    return 0


def _cmd_summarize(args) -> int:
    import csv

    from .harness import RunRecord
    try:
        with open(args.infile, newline="") as fh:
            reader = csv.DictReader(fh)
            records = []
            for row in reader:
                failed = row["error"] == ""
                records.append(RunRecord(
                    satellite=row["satellite"], profile=row["profile"],
                    inertia_mode=row["inertia_mode"], estimator=row["estimator"],
                    seed=int(row["seed"]),
                    error=None if failed else float(row["error"]),
                    cond_number=float(row["cond_number"]) if row["cond_number"] else None,
                    wall_time_s=float(row["wall_time_s"] or 0.0), failed=failed))
    except (OSError, KeyError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot parse {args.infile}: {exc}") from exc
    if not records:
        raise ConfigError(f"{args.infile} holds no records")
    write_summary_csv(summarize(records), args.outfile)
    print(f"summary -> {args.outfile}")
    return 0


def _cmd_profile_dump(args) -> int:
    try:
        kind = ProfileKind.from_name(args.kind)
        profile = generate(kind, args.horizon, args.dt, args.tau_max, args.seed)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    out_dir = os.path.dirname(args.outfile)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    profile_to_csv(profile, args.outfile)
    print(f"profile {kind.value} -> {args.outfile}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
