"""`inertia-id-plot`: render one figure from inertia-id CSV outputs.

    inertia-id-plot --kind StaticBars     --in summary.csv --out static.png
    inertia-id-plot --kind DynamicBars    --in summary.csv --out dynamic.png
    inertia-id-plot --kind TrackingTrace  --in trace_....csv \
                    --estimate ekf_....csv --out tracking.png
    inertia-id-plot --kind ProfileGallery --in profiles/ --out gallery.png

Exit codes: 0 on success, 1 on unusable input (message names the problem
column or file); no image is written on failure.
"""

from __future__ import annotations

import argparse
import os
import sys

from .figures import (ESTIMATE_COLUMNS, SUMMARY_COLUMNS, TRACE_COLUMNS,
                      PlotInputError, dynamic_bars, load_profile_dir,
                      profile_gallery, read_csv_rows, static_bars,
                      tracking_trace)

KINDS = ("StaticBars", "DynamicBars", "TrackingTrace", "ProfileGallery")


def build_figure(args):
    if args.kind == "StaticBars":
        return static_bars(read_csv_rows(args.infile, SUMMARY_COLUMNS),
                           group_by=args.group_by)
    if args.kind == "DynamicBars":
        return dynamic_bars(read_csv_rows(args.infile, SUMMARY_COLUMNS))
    if args.kind == "TrackingTrace":
        if not args.estimate:
            raise PlotInputError("TrackingTrace needs --estimate (the "
                                 "ekf_*.csv trajectory export)")
        return tracking_trace(read_csv_rows(args.infile, TRACE_COLUMNS),
                              read_csv_rows(args.estimate, ESTIMATE_COLUMNS))
    return profile_gallery(load_profile_dir(args.infile))


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="inertia-id-plot",
        description="Figures over inertia-id CSV outputs")
    parser.add_argument("--kind", required=True, choices=KINDS)
    parser.add_argument("--in", dest="infile", required=True,
                        help="summary/trace/profile CSV (directory for "
                             "ProfileGallery)")
    parser.add_argument("--estimate",
                        help="EKF trajectory CSV (TrackingTrace only)")
    parser.add_argument("--out", required=True, help="output image path")
    parser.add_argument("--group-by", default="satellite",
                        help="StaticBars panel key (default: satellite)")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)

    try:
        fig = build_figure(args)
    except PlotInputError as exc:
        print(f"inertia-id-plot: {exc}", file=sys.stderr)
        return 1
    out_dir = os.path.dirname(args.out)
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)
    fig.savefig(args.out, dpi=args.dpi)
    print(f"{args.kind} -> {args.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
