"""Stochastic unraveling of the controlled master equation.

Each trajectory is a pure state.  Per step of length dt, a detection fires
with probability gamma*dt*<sigma2+ sigma2->; on a click the state is hit by
the lowering operator and immediately by the feedback unitary, otherwise it
evolves under the no-click operator 1 - (iH + gamma/2 sigma2+ sigma2-) dt.
Both branches renormalize.  Averaging the trajectory projectors over the
ensemble reproduces the deterministic solution up to O(dt) and Monte-Carlo
noise.

Reproducibility contract: trajectory k of an ensemble with seed s consumes
the uniform stream of numpy's PCG64 seeded with ``trajectory_seed(s, k)``
(a SplitMix64 hash of s XOR k), independent of batching or worker count.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import observables
from ._parallel import run_indexed, worker_count
from .integrator import TimeSeries
from .linalg import eigh_batch
from .model import (
    FeedbackVector,
    SystemParams,
    _hamiltonian_cached,
    _jump_cached,
    validate_density_matrix,
)

__all__ = [
    "EnsembleConfig",
    "ZeroNorm",
    "NotPure",
    "trajectory_seed",
    "jump_probability",
    "apply_jump",
    "trajectory_step",
    "run_trajectory",
    "run_ensemble",
]

_MASK64 = (1 << 64) - 1
_BLOCK = 512


class ZeroNorm(RuntimeError):
    """Jump applied to a state with no qubit-2 excitation (logic/RNG bug)."""


class NotPure(ValueError):
    """Ensemble initial state is not rank one."""


@dataclass(frozen=True)
class EnsembleConfig:
    """Trajectory count, step, horizon and master seed.

    dt <= 1e-3 is recommended: the click probability is first order in dt.
    """

    n_traj: int
    dt: float = 1e-3
    t_end: float = 10.0
    seed: int = 0
    sample_every: int = 1

    def __post_init__(self):
        if int(self.n_traj) != self.n_traj or self.n_traj < 1:
            raise ValueError("n_traj must be a positive integer")
        if not (math.isfinite(self.dt) and self.dt > 0.0):
            raise ValueError("dt must be positive")
        if not (math.isfinite(self.t_end) and self.t_end > 0.0):
            raise ValueError("t_end must be positive")
        if not (0 <= int(self.seed) <= _MASK64):
            raise ValueError("seed must fit in 64 unsigned bits")
        if int(self.sample_every) != self.sample_every or self.sample_every < 1:
            raise ValueError("sample_every must be a positive integer")

    def n_steps(self) -> int:
        return max(1, int(round(self.t_end / self.dt)))


def trajectory_seed(seed: int, index: int) -> int:
    """SplitMix64 expansion of (seed XOR index) into a per-trajectory seed."""
    z = ((int(seed) ^ int(index)) + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (z ^ (z >> 31)) & _MASK64


def _trajectory_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(trajectory_seed(seed, index)))


@lru_cache(maxsize=256)
def _no_jump_cached(p: SystemParams, dt: float) -> np.ndarray:
    decay = np.diag(np.array([1.0, 0.0, 1.0, 0.0], dtype=np.complex128))
    op = np.eye(4, dtype=np.complex128) - (
        1j * _hamiltonian_cached(p) + 0.5 * p.gamma * decay
    ) * dt
    op.setflags(write=False)
    return op


def jump_probability(psi: np.ndarray, p: SystemParams, dt: float) -> float:
    """Click probability gamma*dt*<sigma2+ sigma2-> for one step."""
    pe = abs(psi[0]) ** 2 + abs(psi[2]) ** 2
    return float(p.gamma * dt * pe)


def apply_jump(psi: np.ndarray, f: FeedbackVector) -> np.ndarray:
    """Lowering operator, then the feedback unitary, then renormalize."""
    j, _ = _jump_cached(f)
    phi = j @ psi
    norm = float(np.linalg.norm(phi))
    if norm == 0.0:
        raise ZeroNorm("jump branch taken with zero qubit-2 excitation")
    return phi / norm


def trajectory_step(
    psi: np.ndarray,
    p: SystemParams,
    f: FeedbackVector,
    dt: float,
    rng: np.random.Generator,
) -> tuple[np.ndarray, bool]:
    """Advance one trajectory by dt; returns (new state, clicked?).

    Draws exactly one uniform per call, which is what ties the scalar and
    the blocked ensemble paths to the same decision stream.
    """
    if rng.random() < jump_probability(psi, p, dt):
        return apply_jump(psi, f), True
    phi = _no_jump_cached(p, dt) @ psi
    return phi / np.linalg.norm(phi), False


def run_trajectory(
    psi0: np.ndarray,
    p: SystemParams,
    f: FeedbackVector,
    cfg: EnsembleConfig,
    index: int = 0,
):
    """Single sampled trajectory; returns (times, states, n_jumps)."""
    psi = np.asarray(psi0, dtype=np.complex128).copy()
    norm = float(np.linalg.norm(psi))
    if abs(norm - 1.0) > 1e-9:
        raise ValueError(f"initial state norm {norm:.12g} != 1")
    psi /= norm
    rng = _trajectory_rng(cfg.seed, index)
    n_steps = cfg.n_steps()
    k = int(cfg.sample_every)
    times = cfg.dt * k * np.arange(n_steps // k + 1)
    sampled = np.empty((times.shape[0], 4), dtype=np.complex128)
    sampled[0] = psi
    pos = 1
    jumps = 0
    for i in range(1, n_steps + 1):
        psi, clicked = trajectory_step(psi, p, f, cfg.dt, rng)
        jumps += clicked
        if i % k == 0:
            sampled[pos] = psi
            pos += 1
    return times, sampled, jumps


def _pure_amplitudes(rho0: np.ndarray) -> np.ndarray:
    w, v = eigh_batch(np.asarray(rho0, dtype=np.complex128))
    if w[1] > 1e-9:
        raise NotPure(f"second eigenvalue {w[1]:.3e} exceeds 1e-9")
    psi = v[:, 0]
    # deterministic global phase: largest component made real positive
    lead = int(np.argmax(np.abs(psi)))
    ref = psi[lead]
    psi = psi * (np.conj(ref) / abs(ref))
    return psi / np.linalg.norm(psi)


def _run_block(psi0, lo, hi, p, f, cfg):
    n_steps = cfg.n_steps()
    k = int(cfg.sample_every)
    n_samples = n_steps // k + 1
    nb = hi - lo
    uniforms = np.empty((nb, n_steps))
    for i in range(nb):
        uniforms[i] = _trajectory_rng(cfg.seed, lo + i).random(n_steps)
    om0_t = np.ascontiguousarray(_no_jump_cached(p, cfg.dt).T)
    jump_t = np.ascontiguousarray(_jump_cached(f)[0].T)
    psis = np.tile(psi0, (nb, 1))
    acc = np.zeros((n_samples, 4, 4), dtype=np.complex128)
    acc[0] = nb * np.outer(psi0, np.conj(psi0))
    jumps = np.zeros(nb, dtype=np.int64)
    gdt = p.gamma * cfg.dt
    pos = 1
    for i in range(1, n_steps + 1):
        pe = np.abs(psis[:, 0]) ** 2 + np.abs(psis[:, 2]) ** 2
        clicked = uniforms[:, i - 1] < gdt * pe
        nxt = psis @ om0_t
        if np.any(clicked):
            nxt[clicked] = psis[clicked] @ jump_t
            jumps[clicked] += 1
        norms = np.sqrt(np.sum(np.abs(nxt) ** 2, axis=1))
        if np.any(norms == 0.0):
            raise ZeroNorm("jump branch taken with zero qubit-2 excitation")
        psis = nxt / norms[:, None]
        if i % k == 0:
            acc[pos] += np.einsum("bi,bj->ij", psis, np.conj(psis))
            pos += 1
    return acc, jumps


def run_ensemble(
    rho0: np.ndarray,
    p: SystemParams,
    f: FeedbackVector,
    cfg: EnsembleConfig,
    meta: dict | None = None,
) -> TimeSeries:
    """Average n_traj trajectories started from a pure density matrix.

    The result is deterministic for a given seed: every trajectory owns its
    seed via ``trajectory_seed`` and block partial sums are combined in
    index order, so the worker count changes nothing.
    """
    validate_density_matrix(rho0)
    if p.gamma * cfg.dt >= 1.0:
        raise ValueError("gamma*dt must stay well below 1 for the click expansion")
    psi0 = _pure_amplitudes(rho0)
    n = int(cfg.n_traj)
    blocks = [(lo, min(lo + _BLOCK, n)) for lo in range(0, n, _BLOCK)]
    tasks = [
        (lambda lo=lo, hi=hi: _run_block(psi0, lo, hi, p, f, cfg))
        for lo, hi in blocks
    ]
    results = run_indexed(tasks, worker_count())
    k = int(cfg.sample_every)
    n_samples = cfg.n_steps() // k + 1
    times = cfg.dt * k * np.arange(n_samples)
    acc = np.zeros((n_samples, 4, 4), dtype=np.complex128)
    jumps = np.empty(n, dtype=np.int64)
    for (lo, hi), (block_acc, block_jumps) in zip(blocks, results):
        acc += block_acc
        jumps[lo:hi] = block_jumps
    states = acc / n
    records, _ = observables.batch_observables(times, states)
    full_meta = dict(meta or {})
    full_meta["jumps"] = {
        "mean": float(np.mean(jumps)),
        "std": float(np.std(jumps)),
        "total": int(np.sum(jumps)),
        "n_traj": n,
    }
    return TimeSeries(times=times, records=records, states=states, meta=full_meta)
