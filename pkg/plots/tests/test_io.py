import numpy as np
import pytest

from jumpfeed_plots.io import (
    EmptyInput,
    SchemaMismatch,
    read_grid,
    read_timeseries,
    sniff_schema,
)

from conftest import GRID_HEADER, TIMESERIES_HEADER, make_grid_csv, make_timeseries_csv


def test_sniff_schema(timeseries_csv, grid_csv):
    assert sniff_schema(str(timeseries_csv)) == "timeseries"
    assert sniff_schema(str(grid_csv)) == "grid"


def test_read_timeseries_columns(timeseries_csv):
    data = read_timeseries(str(timeseries_csv))
    assert data.times.shape == (24,)
    assert set(data.columns) == set(TIMESERIES_HEADER.split(","))
    assert np.all(np.diff(data.times) > 0)


def test_read_grid_shape(grid_csv):
    grid = read_grid(str(grid_csv))
    assert grid.axis == "ax"
    assert grid.observable == "abs_rho_eg"
    assert grid.axis_values.shape == (5,)
    assert grid.times.shape == (8,)
    assert grid.values.shape == (5, 8)


def test_bad_header_is_schema_mismatch(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("time,coherence\n0,0.5\n")
    with pytest.raises(SchemaMismatch) as err:
        sniff_schema(str(bad))
    assert "time,coherence" in str(err.value)
    with pytest.raises(SchemaMismatch):
        read_timeseries(str(bad))
    with pytest.raises(SchemaMismatch):
        read_grid(str(bad))


def test_header_only_is_empty_input(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text(TIMESERIES_HEADER + "\n")
    with pytest.raises(EmptyInput):
        read_timeseries(str(empty))
    empty_grid = tmp_path / "emptyg.csv"
    empty_grid.write_text(GRID_HEADER + "\n")
    with pytest.raises(EmptyInput):
        read_grid(str(empty_grid))
    blank = tmp_path / "blank.csv"
    blank.write_text("")
    with pytest.raises(EmptyInput):
        sniff_schema(str(blank))


def test_ragged_row_is_schema_mismatch(tmp_path):
    path = tmp_path / "ragged.csv"
    path.write_text(TIMESERIES_HEADER + "\n0,0.5,0.5\n")
    with pytest.raises(SchemaMismatch):
        read_timeseries(str(path))


def test_non_numeric_cell_is_schema_mismatch(tmp_path):
    path = tmp_path / "nan.csv"
    path.write_text(GRID_HEADER + "\nax,zero,0,abs_rho_eg,0.5\n")
    with pytest.raises(SchemaMismatch):
        read_grid(str(path))


def test_mixed_grid_columns_rejected(tmp_path):
    path = tmp_path / "mixed.csv"
    path.write_text(
        GRID_HEADER
        + "\nax,0,0,abs_rho_eg,0.5\nay,0,1,abs_rho_eg,0.5\n"
    )
    with pytest.raises(SchemaMismatch):
        read_grid(str(path))


def test_inconsistent_time_grid_rejected(tmp_path):
    path = tmp_path / "ragged_grid.csv"
    path.write_text(
        GRID_HEADER
        + "\nax,0,0,abs_rho_eg,0.5\nax,0,1,abs_rho_eg,0.4\nax,1,0,abs_rho_eg,0.5\n"
    )
    with pytest.raises(SchemaMismatch):
        read_grid(str(path))
