import math

import numpy as np
import pytest

from jumpfeed.experiments import (
    FIGURE_IDS,
    InitialState,
    SweepSpec,
    UnknownFigure,
    preset_recipe,
    run_preset,
    sweep,
)
from jumpfeed.integrator import IntegrationConfig, evolve
from jumpfeed.model import FeedbackVector, SystemParams, feedback_rhs

FAST_CFG = IntegrationConfig(dt=1e-3, t_end=2.0, sample_every=20)


def test_named_initial_states():
    plus = InitialState("plus_plus").density_matrix()
    assert np.array_equal(plus, np.full((4, 4), 0.25))
    assert np.array_equal(
        InitialState("ge").pure_amplitudes(), np.array([0, 0, 1, 0], dtype=complex)
    )
    assert np.array_equal(
        InitialState("ee").pure_amplitudes(), np.array([1, 0, 0, 0], dtype=complex)
    )
    assert np.array_equal(
        InitialState("gg").pure_amplitudes(), np.array([0, 0, 0, 1], dtype=complex)
    )


def test_custom_initial_state_amplitudes():
    init = InitialState("custom", amplitudes=(0.5, 0.5, 0.5, 0.5))
    assert np.array_equal(init.density_matrix(), np.full((4, 4), 0.25))
    with pytest.raises(ValueError):
        InitialState("custom", amplitudes=(1.0, 1.0, 0.0, 0.0))
    with pytest.raises(ValueError):
        InitialState("custom")
    with pytest.raises(ValueError):
        InitialState("nope")


def test_custom_initial_state_matrix():
    init = InitialState("custom", matrix=np.eye(4, dtype=complex) / 4.0)
    assert np.array_equal(init.density_matrix(), np.eye(4) / 4.0)
    with pytest.raises(ValueError):
        InitialState("custom", matrix=np.eye(4, dtype=complex))


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        SweepSpec(axis="aw")
    with pytest.raises(ValueError):
        SweepSpec(observable="energy")
    with pytest.raises(ValueError):
        SweepSpec(lo=1.0, hi=0.0)
    with pytest.raises(ValueError):
        SweepSpec(n_points=1)


def test_sigma_z_sweep_rows_are_identical():
    grid = sweep(
        SweepSpec(axis="az", lo=0.0, hi=2.0, n_points=4, integration=FAST_CFG)
    )
    for row in grid.values[1:]:
        assert np.max(np.abs(row - grid.values[0])) < 1e-9


def test_sweep_axis_zero_row_matches_uncontrolled_evolve():
    spec = SweepSpec(axis="ax", lo=0.0, hi=1.0, n_points=3, integration=FAST_CFG)
    grid = sweep(spec)
    ts = evolve(
        spec.init.density_matrix(),
        lambda r: feedback_rhs(r, spec.params, FeedbackVector()),
        FAST_CFG,
    )
    assert np.allclose(grid.times, ts.times, atol=0)
    assert np.max(np.abs(grid.values[0] - ts.column("abs_rho_eg"))) < 1e-12


def test_sweep_pi_periodicity():
    low = sweep(SweepSpec(axis="ax", lo=0.0, hi=math.pi, n_points=4, integration=FAST_CFG))
    high = sweep(
        SweepSpec(axis="ax", lo=math.pi, hi=2.0 * math.pi, n_points=4, integration=FAST_CFG)
    )
    assert np.max(np.abs(low.values - high.values)) < 1e-9


def test_sweep_concurrence_observable_matches_evolve():
    spec = SweepSpec(
        axis="ay",
        lo=0.0,
        hi=1.0,
        n_points=3,
        observable="concurrence",
        init=InitialState("ge"),
        integration=FAST_CFG,
    )
    grid = sweep(spec)
    for i, value in enumerate(spec.axis_values()):
        ts = evolve(
            spec.init.density_matrix(),
            lambda r, v=value: feedback_rhs(r, spec.params, FeedbackVector(ay=v)),
            FAST_CFG,
        )
        assert np.max(np.abs(grid.values[i] - ts.column("concurrence"))) < 1e-10


def test_sweep_is_deterministic_and_thread_agnostic(monkeypatch):
    spec = SweepSpec(axis="ay", lo=0.0, hi=1.0, n_points=5, integration=FAST_CFG)
    a = sweep(spec)
    b = sweep(spec)
    assert np.array_equal(a.values, b.values)
    monkeypatch.setenv("JUMPFEED_THREADS", "3")
    c = sweep(spec)
    assert np.array_equal(a.values, c.values)


def test_sweep_meta_is_complete():
    grid = sweep(SweepSpec(axis="ax", lo=0.0, hi=1.0, n_points=2, integration=FAST_CFG))
    for key in ("params", "feedback", "init", "integration", "ensemble", "sweep"):
        assert key in grid.meta
    assert grid.meta["sweep"]["axis"] == "ax"
    assert grid.meta["params"]["gamma"] == 0.5


def test_ay_near_0p9_dominates_late_concurrence():
    # regression fixtures from the converged dt = 1e-3 run
    cfg = IntegrationConfig(dt=1e-3, t_end=10.0, sample_every=10)
    rho0 = InitialState("ge").density_matrix()
    means = {}
    for ay in (0.0, 0.9):
        ts = evolve(
            rho0,
            lambda r, ay=ay: feedback_rhs(r, SystemParams(), FeedbackVector(ay=ay)),
            cfg,
        )
        late = ts.times > 5.0
        means[ay] = float(np.mean(ts.column("concurrence")[late]))
    assert means[0.9] > means[0.0]
    assert abs(means[0.0] - 0.11539329026724389) < 1e-6
    assert abs(means[0.9] - 0.19008362803053244) < 1e-6


def test_unknown_figure():
    with pytest.raises(UnknownFigure):
        run_preset("fig9z")
    with pytest.raises(UnknownFigure):
        preset_recipe("fig0")


def test_preset_recipes_cover_published_parameter_sets():
    assert set(FIGURE_IDS) == {
        "fig1a", "fig1b", "fig2a", "fig2b", "fig2c",
        "fig3", "fig4a", "fig4b", "fig5a", "fig5b",
    }
    r1 = preset_recipe("fig1a")
    assert r1["runs"]["controlled"] == FeedbackVector(ax=1.2)
    assert r1["runs"]["uncontrolled"] == FeedbackVector()
    assert r1["init"].name == "plus_plus"
    assert preset_recipe("fig1b")["focus"] == "rho1_ee"
    for fig, axis in (("fig2a", "ax"), ("fig2b", "ay"), ("fig2c", "az")):
        spec = preset_recipe(fig)["spec"]
        assert spec.axis == axis
        assert spec.observable == "abs_rho_eg"
        assert (spec.lo, spec.hi, spec.n_points) == (0.0, math.pi, 101)
        assert spec.params == SystemParams(1.0, 1.0, 1.0, 0.5)
    r3 = preset_recipe("fig3")
    assert r3["runs"]["controlled"] == FeedbackVector(ax=0.5 * math.pi)
    r4a = preset_recipe("fig4a")["spec"]
    assert r4a.axis == "ay" and r4a.observable == "concurrence"
    assert r4a.init.name == "ge"
    r4b = preset_recipe("fig4b")
    assert r4b["runs"]["ay_half_pi"] == FeedbackVector(ay=0.5 * math.pi)
    assert r4b["runs"]["ay_0p9"] == FeedbackVector(ay=0.9)
    r5a = preset_recipe("fig5a")["spec"]
    assert r5a.init.name == "ee" and r5a.observable == "concurrence"
    r5b = preset_recipe("fig5b")
    assert r5b["runs"]["controlled"] == FeedbackVector(ay=1.2)
    assert r5b["init"].name == "ee"
