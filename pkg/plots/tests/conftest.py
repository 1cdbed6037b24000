import math

import pytest

TIMESERIES_HEADER = "t,rho1_ee,rho1_gg,abs_rho_eg,px,py,pz,concurrence,purity"
GRID_HEADER = "axis,axis_value,t,observable,value"


def make_timeseries_csv(path, n=24, phase=0.0):
    lines = [TIMESERIES_HEADER]
    for i in range(n):
        t = 0.1 * i
        coh = 0.5 * math.exp(-0.2 * t) * abs(math.cos(t + phase))
        ee = 0.5 + 0.3 * math.sin(t + phase) * math.exp(-0.1 * t)
        px = math.cos(t + phase) * 0.9
        py = math.sin(t + phase) * 0.9
        pz = 0.1 * math.sin(2 * t + phase)
        conc = max(0.0, 0.4 * math.sin(2 * t + phase))
        lines.append(
            f"{t},{ee},{1-ee},{coh},{px},{py},{pz},{conc},{0.8}"
        )
    path.write_text("\n".join(lines) + "\n")
    return path


def make_grid_csv(path, axis="ax", observable="abs_rho_eg", n_axis=5, n_t=8):
    lines = [GRID_HEADER]
    for i in range(n_axis):
        av = math.pi * i / (n_axis - 1)
        for j in range(n_t):
            t = 0.5 * j
            val = 0.5 * math.exp(-0.1 * t) * (1 + 0.5 * math.sin(av + t))
            lines.append(f"{axis},{av},{t},{observable},{val}")
    path.write_text("\n".join(lines) + "\n")
    return path


@pytest.fixture
def timeseries_csv(tmp_path):
    return make_timeseries_csv(tmp_path / "series.csv")


@pytest.fixture
def grid_csv(tmp_path):
    return make_grid_csv(tmp_path / "grid.csv")
