"""Torque-excitation design study for spacecraft inertia identification.

Library layout:
  params      satellite presets, inertia schedules, disturbance constants
  excitation  the eight commanded-torque profile families
  sensors     actuator saturation and measurement noise
  dynamics    rigid-body + reaction-wheel simulator (fixed-step RK4)
  leastsq     batch least-squares inertia identification
  ekf         joint rate/inertia/wheel-speed extended Kalman filter
  metrics     normalized and sliding-window error metrics
  harness     experiment grid, aggregation, CSV persistence
  cli         `inertia-id` command-line entry point
"""

from .dynamics import (BodyState, SimTrace, dynamics_derivative,
                       external_torque, momentum_drift, rk4_step, simulate,
                       total_momentum)
from .ekf import EkfConfig, EkfState, default_config, predict, run_filter, update
from .excitation import (ExcitationProfile, ProfileKind, generate,
                         profile_to_csv, spectral_summary)
from .harness import (ExperimentConfig, RunRecord, default_sensor_config,
                      derive_run_seed, horizon_sweep, run_grid, summarize)
from .leastsq import LsProblem, build_problem, finite_diff_omega_dot, solve
from .metrics import aggregate, normalized_error, sliding_window_error
from .params import (SATELLITES, DisturbanceParams, InertiaMode,
                     InertiaSchedule, SatelliteParams, inertia_at)
from .results import EstimateResult
from .sensors import SensorConfig, measure, measurement_streams, saturate_command

__version__ = "0.1.0"
