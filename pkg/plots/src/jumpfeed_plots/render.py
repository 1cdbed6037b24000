"""Figure analogs from simulator CSVs: line overlays, heatmaps, Bloch tracks."""
from __future__ import annotations

import os
from dataclasses import dataclass

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .io import (
    GridData,
    SchemaMismatch,
    TimeSeriesData,
    read_grid,
    read_timeseries,
    sniff_schema,
)

TIME_LABEL = "t (units of 1/omega)"

# figure id -> (time-series column, y-axis label)
LINE_FIGURES = {
    "fig1a": ("abs_rho_eg", "|rho_eg|"),
    "fig1b": ("rho1_ee", "rho_ee"),
    "fig4b": ("concurrence", "concurrence"),
    "fig5b": ("concurrence", "concurrence"),
}
HEATMAP_FIGURES = ("fig2a", "fig2b", "fig2c", "fig4a", "fig5a")
BLOCH_FIGURES = ("fig3",)

AXIS_LABELS = {"ax": "A_x", "ay": "A_y", "az": "A_z"}

FIGURE_IDS = tuple(LINE_FIGURES) + HEATMAP_FIGURES + BLOCH_FIGURES


@dataclass(frozen=True)
class PlotJob:
    inputs: tuple
    figure_id: str
    output: str
    labels: tuple = None
    title: str = None
    bloch_3d: bool = False

    def __post_init__(self):
        if self.figure_id not in FIGURE_IDS:
            raise ValueError(f"unknown figure id {self.figure_id!r}")
        if not self.inputs:
            raise ValueError("at least one input CSV is required")
        if self.labels is not None and len(self.labels) != len(self.inputs):
            raise ValueError("one label per input, please")


def _series_label(job: PlotJob, index: int) -> str:
    if job.labels is not None:
        return job.labels[index]
    stem = os.path.basename(job.inputs[index])
    return stem[:-4] if stem.endswith(".csv") else stem


def _load_series(job: PlotJob) -> list[TimeSeriesData]:
    loaded = []
    for path in job.inputs:
        if sniff_schema(path) != "timeseries":
            raise SchemaMismatch(
                f"{path}: figure {job.figure_id} expects the time-series schema"
            )
        loaded.append(read_timeseries(path))
    return loaded


def _load_grid(job: PlotJob) -> GridData:
    if len(job.inputs) != 1:
        raise ValueError(f"figure {job.figure_id} takes exactly one grid CSV")
    path = job.inputs[0]
    if sniff_schema(path) != "grid":
        raise SchemaMismatch(f"{path}: figure {job.figure_id} expects the grid schema")
    return read_grid(path)


def _render_lines(job: PlotJob) -> None:
    column, ylabel = LINE_FIGURES[job.figure_id]
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    for i, series in enumerate(_load_series(job)):
        ax.plot(series.times, series.columns[column], label=_series_label(job, i))
    ax.set_xlabel(TIME_LABEL)
    ax.set_ylabel(ylabel)
    ax.set_title(job.title or job.figure_id)
    ax.legend()
    fig.tight_layout()
    fig.savefig(job.output, dpi=150)
    plt.close(fig)


def _render_heatmap(job: PlotJob) -> None:
    grid = _load_grid(job)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    mesh = ax.pcolormesh(grid.times, grid.axis_values, grid.values, shading="nearest")
    fig.colorbar(mesh, ax=ax, label=grid.observable)
    ax.set_xlabel(TIME_LABEL)
    ax.set_ylabel(AXIS_LABELS.get(grid.axis, grid.axis))
    ax.set_title(job.title or job.figure_id)
    fig.tight_layout()
    fig.savefig(job.output, dpi=150)
    plt.close(fig)


def _render_bloch(job: PlotJob) -> None:
    series = _load_series(job)
    panels = [("px", "py"), ("px", "pz"), ("py", "pz")]
    ncols = 4 if job.bloch_3d else 3
    fig = plt.figure(figsize=(4.0 * ncols, 4.0))
    circle_t = np.linspace(0.0, 2.0 * np.pi, 256)
    for k, (xname, yname) in enumerate(panels):
        ax = fig.add_subplot(1, ncols, k + 1)
        ax.plot(np.cos(circle_t), np.sin(circle_t), lw=0.6, color="0.7")
        for i, s in enumerate(series):
            ax.plot(s.columns[xname], s.columns[yname], label=_series_label(job, i))
        ax.set_xlabel(xname)
        ax.set_ylabel(yname)
        ax.set_xlim(-1.05, 1.05)
        ax.set_ylim(-1.05, 1.05)
        ax.set_aspect("equal")
        if k == 0:
            ax.legend(fontsize="small")
    if job.bloch_3d:
        ax3 = fig.add_subplot(1, ncols, ncols, projection="3d")
        for i, s in enumerate(series):
            ax3.plot(
                s.columns["px"], s.columns["py"], s.columns["pz"],
                label=_series_label(job, i),
            )
        ax3.set_xlabel("px")
        ax3.set_ylabel("py")
        ax3.set_zlabel("pz")
    fig.suptitle(job.title or job.figure_id)
    fig.tight_layout()
    fig.savefig(job.output, dpi=150)
    plt.close(fig)


def render(job: PlotJob) -> str:
    """Render the job to a PNG; returns the output path.

    Inputs are never mutated; rerunning with identical inputs and options
    reproduces the image byte for byte.
    """
    if job.figure_id in LINE_FIGURES:
        _render_lines(job)
    elif job.figure_id in HEATMAP_FIGURES:
        _render_heatmap(job)
    else:
        _render_bloch(job)
    return job.output
