"""Render jumpfeed CSV outputs as figure analogs (PNG)."""

__version__ = "0.1.0"

from .io import (
    EmptyInput,
    GridData,
    SchemaMismatch,
    TimeSeriesData,
    read_grid,
    read_timeseries,
    sniff_schema,
)
from .render import FIGURE_IDS, PlotJob, render

__all__ = [
    "__version__",
    "EmptyInput",
    "GridData",
    "SchemaMismatch",
    "TimeSeriesData",
    "read_grid",
    "read_timeseries",
    "sniff_schema",
    "FIGURE_IDS",
    "PlotJob",
    "render",
]
