"""Acceptance: a fig2a grid CSV renders to a PNG; schema violations exit nonzero."""
from jumpfeed_plots.cli import main

from conftest import TIMESERIES_HEADER, make_grid_csv


def test_fig2a_grid_csv_renders_png(tmp_path):
    grid = make_grid_csv(tmp_path / "fig2a.csv", axis="ax", n_axis=11, n_t=21)
    out = tmp_path / "fig2a.png"
    rc = main([str(grid), "--figure", "fig2a", "--out", str(out)])
    ok = rc == 0 and out.exists() and out.read_bytes()[:8] == b"\x89PNG\r\n\x1a\n"
    print(f"[{'PASS' if ok else 'FAIL'}] plots: fig2a grid -> PNG (rc={rc})")
    assert ok


def test_schema_violation_exits_nonzero(tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("a,b,c\n1,2,3\n")
    rc = main([str(bad), "--figure", "fig2a", "--out", str(tmp_path / "x.png")])
    empty = tmp_path / "empty.csv"
    empty.write_text(TIMESERIES_HEADER + "\n")
    rc_empty = main([str(empty), "--figure", "fig1a", "--out", str(tmp_path / "y.png")])
    rc_missing = main(
        [str(tmp_path / "nope.csv"), "--figure", "fig2a", "--out", str(tmp_path / "z.png")]
    )
    ok = rc != 0 and rc_empty != 0 and rc_missing != 0
    print(
        f"[{'PASS' if ok else 'FAIL'}] plots: schema violations exit nonzero "
        f"(bad header rc={rc}, empty rc={rc_empty}, missing rc={rc_missing})"
    )
    assert ok


def test_usage_errors_exit_one(tmp_path):
    assert main(["--figure", "fig1a", "--out", "x.png"]) == 1  # no inputs
    grid = make_grid_csv(tmp_path / "g.csv")
    assert main([str(grid), "--figure", "nope", "--out", "x.png"]) == 1
