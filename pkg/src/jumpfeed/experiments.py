"""Named figure presets and the generic feedback-amplitude sweep engine.

All presets use the canonical working point omega1 = omega2 = 1, g = 1,
gamma = 0.5 and integrate with dt = 1e-3 up to t = 10.  Time-series presets
sample every step; sweep grids sample every 10 steps, which is plenty for a
heatmap and keeps 101-row grids quick.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import observables
from ._parallel import run_indexed, worker_count
from .integrator import IntegrationConfig, TimeSeries, evolve, propagate_batch
from .model import (
    FeedbackVector,
    SystemParams,
    _hamiltonian_cached,
    _jump_cached,
    feedback_rhs,
    validate_density_matrix,
)

__all__ = [
    "InitialState",
    "SweepSpec",
    "SweepGrid",
    "UnknownFigure",
    "FIGURE_IDS",
    "SWEEP_AXES",
    "SWEEP_OBSERVABLES",
    "run_preset",
    "sweep",
]

SWEEP_AXES = ("ax", "ay", "az")
SWEEP_OBSERVABLES = ("abs_rho_eg", "concurrence")

_NAMED_STATES = {
    "plus_plus": (0.5, 0.5, 0.5, 0.5),  # both qubits in (|e>+|g>)/sqrt(2)
    "ge": (0.0, 0.0, 1.0, 0.0),
    "ee": (1.0, 0.0, 0.0, 0.0),
    "gg": (0.0, 0.0, 0.0, 1.0),
}


class UnknownFigure(ValueError):
    """No preset with the requested figure id."""


@dataclass(frozen=True, eq=False)
class InitialState:
    """Named initial state, or a custom pure state / density matrix."""

    name: str = "plus_plus"
    amplitudes: tuple = None
    matrix: np.ndarray = None

    def __post_init__(self):
        if self.name != "custom":
            if self.name not in _NAMED_STATES:
                raise ValueError(f"unknown initial state {self.name!r}")
            if self.amplitudes is not None or self.matrix is not None:
                raise ValueError("only name='custom' takes amplitudes or a matrix")
            return
        if (self.amplitudes is None) == (self.matrix is None):
            raise ValueError("custom state needs amplitudes or a matrix, not both")
        if self.amplitudes is not None:
            amps = np.asarray(self.amplitudes, dtype=np.complex128)
            if amps.shape != (4,):
                raise ValueError("custom amplitudes must have length 4")
            norm = float(np.linalg.norm(amps))
            if abs(norm - 1.0) > 1e-6:
                raise ValueError(f"custom amplitudes norm {norm:.8g} != 1")
        else:
            validate_density_matrix(np.asarray(self.matrix))

    def pure_amplitudes(self) -> np.ndarray:
        if self.name != "custom":
            return np.asarray(_NAMED_STATES[self.name], dtype=np.complex128)
        if self.amplitudes is None:
            raise ValueError("custom matrix state has no amplitude vector")
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        return amps / np.linalg.norm(amps)

    def density_matrix(self) -> np.ndarray:
        if self.name == "custom" and self.matrix is not None:
            return np.asarray(self.matrix, dtype=np.complex128).copy()
        amps = self.pure_amplitudes()
        return np.outer(amps, np.conj(amps))

    def describe(self) -> dict:
        out = {"name": self.name}
        if self.amplitudes is not None:
            out["amplitudes"] = [[z.real, z.imag] for z in map(complex, self.amplitudes)]
        if self.matrix is not None:
            m = np.asarray(self.matrix, dtype=np.complex128)
            out["matrix"] = [[[z.real, z.imag] for z in row] for row in m.tolist()]
        return out


@dataclass(frozen=True, eq=False)
class SweepSpec:
    """One feedback amplitude swept over a grid, one observable recorded."""

    axis: str = "ax"
    lo: float = 0.0
    hi: float = math.pi
    n_points: int = 101
    observable: str = "abs_rho_eg"
    params: SystemParams = SystemParams()
    init: InitialState = InitialState()
    integration: IntegrationConfig = IntegrationConfig(sample_every=10)
    base_feedback: FeedbackVector = FeedbackVector()

    def __post_init__(self):
        if self.axis not in SWEEP_AXES:
            raise ValueError(f"axis must be one of {SWEEP_AXES}")
        if self.observable not in SWEEP_OBSERVABLES:
            raise ValueError(f"observable must be one of {SWEEP_OBSERVABLES}")
        if not self.lo < self.hi:
            raise ValueError("need lo < hi")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError("n_points must be an integer >= 2")

    def axis_values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, int(self.n_points))

    def feedback_at(self, value: float) -> FeedbackVector:
        return replace(self.base_feedback, **{self.axis: float(value)})


@dataclass
class SweepGrid:
    """Observable values on (axis value) x (time); rows follow axis order."""

    axis: str
    axis_values: np.ndarray
    times: np.ndarray
    observable: str
    values: np.ndarray
    meta: dict

    def __post_init__(self):
        self.axis_values = np.asarray(self.axis_values, dtype=float)
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.values.shape != (self.axis_values.shape[0], self.times.shape[0]):
            raise ValueError("values must be shaped (n_axis, n_times)")


def _grid_chunk(spec: SweepSpec, values: np.ndarray):
    p = spec.params
    h = _hamiltonian_cached(p)
    jumps = np.stack([_jump_cached(spec.feedback_at(v))[0] for v in values])
    jumps_dag = np.conj(np.swapaxes(jumps, 1, 2))
    decay = np.array([1.0, 0.0, 1.0, 0.0])
    gamma = p.gamma

    def rhs_batch(rb):
        comm = h @ rb - rb @ h
        hop = jumps @ rb @ jumps_dag
        damp = decay[None, :, None] * rb + rb * decay[None, None, :]
        return -1j * comm + gamma * (hop - 0.5 * damp)

    rho0 = spec.init.density_matrix()
    rhos = np.broadcast_to(rho0, (values.shape[0], 4, 4)).copy()

    def row_detail(j):
        return f"{spec.axis}={values[j]:.12g}"

    times, sampled = propagate_batch(rhos, rhs_batch, spec.integration, row_detail)
    flat = sampled.reshape(-1, 4, 4)
    if spec.observable == "abs_rho_eg":
        rho1 = np.einsum("sikjk->sij", flat.reshape(-1, 2, 2, 2, 2))
        col = np.abs(rho1[:, 0, 1])
    else:
        col = observables.concurrence_batch(flat)
    # flat is ordered (sample, row); rows must become grid rows
    return times, col.reshape(times.shape[0], values.shape[0]).T


def sweep(spec: SweepSpec) -> SweepGrid:
    """Run every row of the sweep; rows are independent and deterministic.

    The row set is processed in contiguous chunks; JUMPFEED_THREADS caps how
    many chunks run concurrently.  The grid is assembled in axis order
    either way.
    """
    axis_values = spec.axis_values()
    workers = worker_count()
    n = axis_values.shape[0]
    n_chunks = min(workers, n) if workers > 1 else 1
    bounds = np.linspace(0, n, n_chunks + 1).astype(int)
    chunks = [(bounds[i], bounds[i + 1]) for i in range(n_chunks) if bounds[i] < bounds[i + 1]]
    tasks = [
        (lambda lo=lo, hi=hi: _grid_chunk(spec, axis_values[lo:hi]))
        for lo, hi in chunks
    ]
    results = run_indexed(tasks, workers)
    times = results[0][0]
    values = np.vstack([part for _, part in results])
    meta = {
        "params": _params_dict(spec.params),
        "feedback": _feedback_dict(spec.base_feedback),
        "init": spec.init.describe(),
        "integration": _integration_dict(spec.integration),
        "ensemble": None,
        "sweep": {
            "axis": spec.axis,
            "lo": spec.lo,
            "hi": spec.hi,
            "n_points": int(spec.n_points),
            "observable": spec.observable,
        },
    }
    return SweepGrid(
        axis=spec.axis,
        axis_values=axis_values,
        times=times,
        observable=spec.observable,
        values=values,
        meta=meta,
    )


def _params_dict(p: SystemParams) -> dict:
    return {"omega1": p.omega1, "omega2": p.omega2, "g": p.g, "gamma": p.gamma}


def _feedback_dict(f: FeedbackVector) -> dict:
    return {"ax": f.ax, "ay": f.ay, "az": f.az}


def _integration_dict(cfg: IntegrationConfig) -> dict:
    return {"dt": cfg.dt, "t_end": cfg.t_end, "sample_every": int(cfg.sample_every)}


_PAPER_PARAMS = SystemParams(omega1=1.0, omega2=1.0, g=1.0, gamma=0.5)
_SERIES_CFG = IntegrationConfig(dt=1e-3, t_end=10.0, sample_every=1)
_GRID_CFG = IntegrationConfig(dt=1e-3, t_end=10.0, sample_every=10)

FIGURE_IDS = (
    "fig1a",
    "fig1b",
    "fig2a",
    "fig2b",
    "fig2c",
    "fig3",
    "fig4a",
    "fig4b",
    "fig5a",
    "fig5b",
)


def preset_recipe(figure_id: str) -> dict:
    """Declarative description of a preset; running it is ``run_preset``."""
    if figure_id not in FIGURE_IDS:
        raise UnknownFigure(f"unknown figure id {figure_id!r}")
    plus = InitialState("plus_plus")
    ge = InitialState("ge")
    ee = InitialState("ee")
    if figure_id in ("fig1a", "fig1b"):
        return {
            "kind": "series",
            "init": plus,
            "runs": {
                "controlled": FeedbackVector(ax=1.2),
                "uncontrolled": FeedbackVector(),
            },
            "focus": "abs_rho_eg" if figure_id == "fig1a" else "rho1_ee",
        }
    if figure_id in ("fig2a", "fig2b", "fig2c"):
        axis = {"fig2a": "ax", "fig2b": "ay", "fig2c": "az"}[figure_id]
        return {
            "kind": "grid",
            "spec": SweepSpec(
                axis=axis,
                observable="abs_rho_eg",
                params=_PAPER_PARAMS,
                init=plus,
                integration=_GRID_CFG,
            ),
        }
    if figure_id == "fig3":
        return {
            "kind": "series",
            "init": plus,
            "runs": {
                "controlled": FeedbackVector(ax=0.5 * math.pi),
                "uncontrolled": FeedbackVector(),
            },
            "focus": "bloch",
        }
    if figure_id == "fig4a":
        return {
            "kind": "grid",
            "spec": SweepSpec(
                axis="ay",
                observable="concurrence",
                params=_PAPER_PARAMS,
                init=ge,
                integration=_GRID_CFG,
            ),
        }
    if figure_id == "fig4b":
        # text and caption disagree on the best amplitude; emit both cuts
        return {
            "kind": "series",
            "init": ge,
            "runs": {
                "uncontrolled": FeedbackVector(),
                "ay_half_pi": FeedbackVector(ay=0.5 * math.pi),
                "ay_0p9": FeedbackVector(ay=0.9),
            },
            "focus": "concurrence",
        }
    if figure_id == "fig5a":
        return {
            "kind": "grid",
            "spec": SweepSpec(
                axis="ay",
                observable="concurrence",
                params=_PAPER_PARAMS,
                init=ee,
                integration=_GRID_CFG,
            ),
        }
    return {
        "kind": "series",
        "init": ee,
        "runs": {
            "uncontrolled": FeedbackVector(),
            "controlled": FeedbackVector(ay=1.2),
        },
        "focus": "concurrence",
    }


def run_preset(figure_id: str) -> dict:
    """Run a figure preset; returns {label: TimeSeries | SweepGrid}.

    Deterministic: rerunning a preset reproduces the data bit for bit.
    Every product's meta carries the full parameter set.
    """
    recipe = preset_recipe(figure_id)
    if recipe["kind"] == "grid":
        grid = sweep(recipe["spec"])
        grid.meta["figure"] = figure_id
        return {"grid": grid}
    init = recipe["init"]
    rho0 = init.density_matrix()
    products: dict[str, TimeSeries] = {}
    for label, f in recipe["runs"].items():
        meta = {
            "params": _params_dict(_PAPER_PARAMS),
            "feedback": _feedback_dict(f),
            "init": init.describe(),
            "integration": _integration_dict(_SERIES_CFG),
            "ensemble": None,
            "figure": figure_id,
            "label": label,
            "focus": recipe["focus"],
        }
        products[label] = evolve(
            rho0,
            lambda rho, f=f: feedback_rhs(rho, _PAPER_PARAMS, f),
            _SERIES_CFG,
            meta=meta,
        )
    return products
