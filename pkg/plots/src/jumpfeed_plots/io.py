"""Readers for the simulator's two CSV contracts.

Headers are matched bit-exactly; anything else is a SchemaMismatch.  A file
with a valid header but no data rows is EmptyInput.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

TIMESERIES_HEADER = "t,rho1_ee,rho1_gg,abs_rho_eg,px,py,pz,concurrence,purity"
GRID_HEADER = "axis,axis_value,t,observable,value"

TIMESERIES_FIELDS = tuple(TIMESERIES_HEADER.split(","))


class SchemaMismatch(ValueError):
    """Input file does not follow the expected CSV contract."""


class EmptyInput(ValueError):
    """Input file has a valid header but no data rows."""


@dataclass
class TimeSeriesData:
    path: str
    columns: dict

    @property
    def times(self) -> np.ndarray:
        return self.columns["t"]


@dataclass
class GridData:
    path: str
    axis: str
    observable: str
    axis_values: np.ndarray
    times: np.ndarray
    values: np.ndarray  # (n_axis, n_times)


def _read_lines(path: str) -> list[str]:
    with open(path) as fh:
        return [line.rstrip("\n") for line in fh if line.strip() != ""]


def sniff_schema(path: str) -> str:
    """'timeseries' or 'grid', judged by the exact header line."""
    lines = _read_lines(path)
    if not lines:
        raise EmptyInput(f"{path}: file is empty")
    header = lines[0]
    if header == TIMESERIES_HEADER:
        return "timeseries"
    if header == GRID_HEADER:
        return "grid"
    raise SchemaMismatch(
        f"{path}: header {header!r} matches neither the time-series nor the "
        f"grid contract"
    )


def read_timeseries(path: str) -> TimeSeriesData:
    lines = _read_lines(path)
    if not lines:
        raise EmptyInput(f"{path}: file is empty")
    if lines[0] != TIMESERIES_HEADER:
        raise SchemaMismatch(
            f"{path}: expected time-series header {TIMESERIES_HEADER!r}, "
            f"got {lines[0]!r}"
        )
    if len(lines) == 1:
        raise EmptyInput(f"{path}: no data rows")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(TIMESERIES_FIELDS):
            raise SchemaMismatch(
                f"{path}:{lineno}: expected {len(TIMESERIES_FIELDS)} cells, "
                f"got {len(parts)}"
            )
        try:
            rows.append([float(cell) for cell in parts])
        except ValueError:
            raise SchemaMismatch(f"{path}:{lineno}: non-numeric cell in {line!r}")
    data = np.asarray(rows)
    columns = {name: data[:, i] for i, name in enumerate(TIMESERIES_FIELDS)}
    return TimeSeriesData(path=path, columns=columns)


def read_grid(path: str) -> GridData:
    lines = _read_lines(path)
    if not lines:
        raise EmptyInput(f"{path}: file is empty")
    if lines[0] != GRID_HEADER:
        raise SchemaMismatch(
            f"{path}: expected grid header {GRID_HEADER!r}, got {lines[0]!r}"
        )
    if len(lines) == 1:
        raise EmptyInput(f"{path}: no data rows")
    axis = observable = None
    by_axis_value: dict[float, list[tuple[float, float]]] = {}
    order: list[float] = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != 5:
            raise SchemaMismatch(f"{path}:{lineno}: expected 5 cells, got {len(parts)}")
        row_axis, raw_av, raw_t, row_obs, raw_val = parts
        if axis is None:
            axis, observable = row_axis, row_obs
        elif row_axis != axis or row_obs != observable:
            raise SchemaMismatch(
                f"{path}:{lineno}: mixed axis/observable columns "
                f"({row_axis!r}/{row_obs!r} vs {axis!r}/{observable!r})"
            )
        try:
            av, t, val = float(raw_av), float(raw_t), float(raw_val)
        except ValueError:
            raise SchemaMismatch(f"{path}:{lineno}: non-numeric cell in {line!r}")
        if av not in by_axis_value:
            by_axis_value[av] = []
            order.append(av)
        by_axis_value[av].append((t, val))
    times = np.asarray([t for t, _ in by_axis_value[order[0]]])
    values = np.empty((len(order), times.shape[0]))
    for i, av in enumerate(order):
        rows = by_axis_value[av]
        if len(rows) != times.shape[0] or any(
            rows[j][0] != times[j] for j in range(len(rows))
        ):
            raise SchemaMismatch(
                f"{path}: axis value {av!r} does not share the common time grid"
            )
        values[i] = [val for _, val in rows]
    return GridData(
        path=path,
        axis=axis,
        observable=observable,
        axis_values=np.asarray(order),
        times=times,
        values=values,
    )
