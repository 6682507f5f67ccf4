"""A small Monte-Carlo grid end to end: run, aggregate, persist.

Two satellites x three profiles x two inertia modes x both estimators x
five seeds (120 runs, ~30 s). The full default grid is
`inertia-id run --out results/`.
"""

import os

from inertia_id import ExperimentConfig, run_grid, summarize
from inertia_id.harness import write_results_csv, write_summary_csv

cfg = ExperimentConfig(satellites=("CubeSat", "Microsat"),
                       profiles=("sine", "chirp", "prbs"),
                       modes=("static", "drift"),
                       seeds=5)
records = run_grid(cfg)
print(f"{len(records)} runs, {sum(r.failed for r in records)} failed\n")

rows = summarize(records)
print(f"{'satellite':9s} {'profile':7s} {'mode':7s} {'est':4s} "
      f"{'mean%':>7s} {'std%':>6s} best")
for row in rows:
    print(f"{row['satellite']:9s} {row['profile']:7s} {row['inertia_mode']:7s} "
          f"{row['estimator']:4s} {row['mean_error_pct']:7.3f} "
          f"{row['std_error_pct']:6.3f} {'  *' if row['best'] else ''}")

os.makedirs("results", exist_ok=True)
write_results_csv(records, "results/demo_results.csv")
write_summary_csv(rows, "results/demo_summary.csv")
print("\nwrote results/demo_results.csv and results/demo_summary.csv")
