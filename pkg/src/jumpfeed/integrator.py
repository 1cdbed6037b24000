"""Fixed-step RK4 propagation of density-matrix equations of motion.

The step is the classic 4-stage Runge-Kutta update followed by an explicit
re-Hermitization (rho + rho^dag)/2, which keeps max|rho - rho^dag| exactly
zero in floating point.  The trace is monitored at sample times but never
renormalized; renormalizing would mask integrator bugs.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import observables
from .linalg import NotPositive, eigvalsh_batch
from .model import validate_density_matrix

__all__ = [
    "IntegrationConfig",
    "TimeSeries",
    "StateCorrupted",
    "rk4_step",
    "evolve",
    "propagate_batch",
]

TRACE_TOL = 1e-8
EIG_FLOOR = -1e-7


class StateCorrupted(RuntimeError):
    """A sampled state violated a density-matrix bound during integration."""

    def __init__(self, t: float, what: str, value: float, bound: float, detail: str = ""):
        self.t = t
        self.what = what
        self.value = value
        self.bound = bound
        self.detail = detail
        where = f" ({detail})" if detail else ""
        super().__init__(
            f"state invariant violated at t={t:.6g}{where}: "
            f"{what}={value:.6e} (bound {bound:.1e})"
        )


@dataclass(frozen=True)
class IntegrationConfig:
    """Step size and horizon, in units of 1/omega."""

    dt: float = 1e-3
    t_end: float = 10.0
    sample_every: int = 1

    def __post_init__(self):
        if not (0.0 < self.dt <= 0.01):
            raise ValueError("dt must lie in (0, 0.01]")
        if not (math.isfinite(self.t_end) and self.t_end > 0.0):
            raise ValueError("t_end must be positive")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ValueError("sample_every must be a positive integer")

    def n_steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt)))


@dataclass
class TimeSeries:
    """Sampled observables (and states) over a strictly increasing time grid."""

    times: np.ndarray
    records: list
    states: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        if len(self.records) != self.times.shape[0]:
            raise ValueError("times and records must have equal length")
        if np.any(np.diff(self.times) <= 0.0):
            raise ValueError("times must be strictly increasing")

    def column(self, name: str) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.records])


def rk4_step(rhs, rho: np.ndarray, dt: float) -> np.ndarray:
    """One classic RK4 update of drho/dt = rhs(rho), then re-Hermitize."""
    k1 = rhs(rho)
    k2 = rhs(rho + (0.5 * dt) * k1)
    k3 = rhs(rho + (0.5 * dt) * k2)
    k4 = rhs(rho + dt * k3)
    out = rho + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
    return 0.5 * (out + np.conj(out).T)


def _audit_samples(times, states, min_eigs, detail: str = ""):
    traces = np.einsum("sii->s", states).real
    trace_dev = np.abs(traces - 1.0)
    herm_dev = np.max(np.abs(states - np.conj(np.swapaxes(states, 1, 2))), axis=(1, 2))
    bad = (trace_dev > TRACE_TOL) | (herm_dev > 0.0) | (min_eigs < EIG_FLOOR)
    if not np.any(bad):
        return
    i = int(np.argmax(bad))
    t = float(times[i])
    if trace_dev[i] > TRACE_TOL:
        raise StateCorrupted(t, "|trace - 1|", float(trace_dev[i]), TRACE_TOL, detail)
    if herm_dev[i] > 0.0:
        raise StateCorrupted(t, "max|rho - rho^dag|", float(herm_dev[i]), 0.0, detail)
    raise StateCorrupted(t, "min eigenvalue", float(min_eigs[i]), EIG_FLOOR, detail)


def evolve(
    rho0: np.ndarray,
    rhs,
    cfg: IntegrationConfig,
    meta: dict | None = None,
) -> TimeSeries:
    """Propagate rho0 under drho/dt = rhs(rho) and sample along the way.

    Samples are taken at t = 0 and after every ``cfg.sample_every``-th step.
    Each sampled state must stay a density matrix (trace within 1e-8 of 1,
    Hermitian, smallest eigenvalue above -1e-7); the first violation raises
    StateCorrupted with the offending time and bound.
    """
    validate_density_matrix(rho0)
    rho = np.array(rho0, dtype=np.complex128)
    rho = 0.5 * (rho + np.conj(rho).T)
    n_steps = cfg.n_steps()
    k = int(cfg.sample_every)
    n_samples = n_steps // k + 1
    times = cfg.dt * k * np.arange(n_samples)
    states = np.empty((n_samples, 4, 4), dtype=np.complex128)
    states[0] = rho
    pos = 1
    for i in range(1, n_steps + 1):
        rho = rk4_step(rhs, rho, cfg.dt)
        if i % k == 0:
            states[pos] = rho
            pos += 1
    try:
        records, min_eigs = observables.batch_observables(times, states)
    except NotPositive:
        # a state below the -1e-7 floor is the integrator's error to report
        _audit_samples(times, states, eigvalsh_batch(states)[:, -1])
        raise
    _audit_samples(times, states, min_eigs)
    return TimeSeries(times=times, records=records, states=states, meta=dict(meta or {}))


def propagate_batch(
    rhos: np.ndarray,
    rhs_batch,
    cfg: IntegrationConfig,
    row_detail=None,
) -> tuple[np.ndarray, np.ndarray]:
    """RK4-propagate a stack of states under a batched right-hand side.

    ``rhs_batch`` maps an (r, 4, 4) stack to its derivative stack; all rows
    advance in lockstep.  Returns (times, sampled) with sampled of shape
    (n_samples, r, 4, 4).  Rows are audited like ``evolve`` does;
    ``row_detail(j)`` supplies the error context for row j.
    """
    rho = np.array(rhos, dtype=np.complex128)
    if rho.ndim != 3:
        raise ValueError("expected a stack of matrices")
    n_rows = rho.shape[0]
    n_steps = cfg.n_steps()
    k = int(cfg.sample_every)
    n_samples = n_steps // k + 1
    times = cfg.dt * k * np.arange(n_samples)
    sampled = np.empty((n_samples, n_rows, 4, 4), dtype=np.complex128)
    sampled[0] = rho
    pos = 1
    dt = cfg.dt
    for i in range(1, n_steps + 1):
        k1 = rhs_batch(rho)
        k2 = rhs_batch(rho + (0.5 * dt) * k1)
        k3 = rhs_batch(rho + (0.5 * dt) * k2)
        k4 = rhs_batch(rho + dt * k3)
        rho = rho + (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        rho = 0.5 * (rho + np.conj(np.swapaxes(rho, 1, 2)))
        if i % k == 0:
            sampled[pos] = rho
            pos += 1
    flat = sampled.reshape(-1, 4, 4)
    min_eigs = eigvalsh_batch(flat)[:, -1].reshape(n_samples, n_rows)
    for j in range(n_rows):
        detail = row_detail(j) if row_detail is not None else f"row {j}"
        _audit_samples(times, sampled[:, j], min_eigs[:, j], detail)
    return times, sampled
