"""Identify a constant inertia from one noisy episode, LS vs EKF.

Also shows the two failure axes: a single pulse (poor conditioning) and
what the regressor conditioning numbers look like per profile.
"""

import numpy as np

from inertia_id import (SATELLITES, DisturbanceParams, InertiaMode,
                        InertiaSchedule, build_problem, default_sensor_config,
                        generate, normalized_error, run_filter, simulate,
                        solve)

sat = SATELLITES["Microsat"]
schedule = InertiaSchedule(InertiaMode.STATIC, sat.inertia_nominal, 300.0)
sensors = default_sensor_config(sat)
print(f"Microsat, true inertia {list(sat.inertia_nominal)} kg m^2, "
      f"gyro sigma {sensors.gyro_noise_std:.1e} rad/s\n")

print(f"{'profile':12s} {'LS estimate':>28s} {'err%':>6s} "
      f"{'EKF err%':>9s} {'cond':>7s}")
for name in ("one-step", "sine", "multi-sine", "chirp", "prbs"):
    profile = generate(name, 300.0, 0.1, sat.rw_max_torque, seed=1)
    trace = simulate(sat, schedule, profile, DisturbanceParams(), sensors,
                     seed=1)
    problem = build_problem(trace)
    ls = solve(problem)
    ekf = run_filter(trace)
    ls_err = 100 * normalized_error(ls.inertia_hat, sat.inertia)
    ekf_err = 100 * normalized_error(ekf.inertia_hat, sat.inertia)
    est = np.array2string(ls.inertia_hat, precision=3)
    print(f"{name:12s} {est:>28s} {ls_err:6.2f} {ekf_err:9.2f} "
          f"{problem.condition_number:7.1f}")

print("\nRicher spectra condition the regression better; the filter")
print("refines its estimate recursively and is less hurt by the")
print("finite-difference noise amplification that biases batch LS.")
