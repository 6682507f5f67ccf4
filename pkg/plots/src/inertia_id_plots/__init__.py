"""Figures over inertia-id CSV outputs; see figures.py and the CLI."""

from .figures import (PlotInputError, dynamic_bars, profile_gallery,
                      read_csv_rows, static_bars, tracking_trace)

__version__ = "0.1.0"
