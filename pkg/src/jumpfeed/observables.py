"""Measurements on two-qubit states.

Scalar functions operate on a single state; ``batch_observables`` runs the
same arithmetic over a stack of sampled states in a handful of vectorized
passes, which is what keeps long time series cheap.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import linalg
from .linalg import NEGATIVE_EIGENVALUE_FLOOR, dagger, kron
from .model import SIGMA_Y

__all__ = [
    "ObservableRecord",
    "CSV_FIELDS",
    "partial_trace_qubit2",
    "coherence_and_populations",
    "bloch_vector",
    "spin_flip",
    "concurrence",
    "concurrence_batch",
    "purity",
    "batch_observables",
]

CSV_FIELDS = (
    "t",
    "rho1_ee",
    "rho1_gg",
    "abs_rho_eg",
    "px",
    "py",
    "pz",
    "concurrence",
    "purity",
)

_SIGMA_YY = kron(SIGMA_Y, SIGMA_Y)
_SIGMA_YY.setflags(write=False)


@dataclass(frozen=True)
class ObservableRecord:
    """One sampled point: qubit-1 reduced state plus two-qubit measures."""

    t: float
    rho1_ee: float
    rho1_gg: float
    abs_rho_eg: float
    px: float
    py: float
    pz: float
    concurrence: float
    purity: float

    def as_row(self) -> tuple[float, ...]:
        return (
            self.t,
            self.rho1_ee,
            self.rho1_gg,
            self.abs_rho_eg,
            self.px,
            self.py,
            self.pz,
            self.concurrence,
            self.purity,
        )


def partial_trace_qubit2(rho: np.ndarray) -> np.ndarray:
    """Reduced state of qubit 1: rho1[i, j] = sum_k rho[(i,k), (j,k)]."""
    rho = np.asarray(rho, dtype=np.complex128)
    return np.einsum("ikjk->ij", rho.reshape(2, 2, 2, 2))


def coherence_and_populations(rho1: np.ndarray) -> tuple[float, float, float]:
    """(|rho_eg|, rho_ee, rho_gg) of a single-qubit density matrix."""
    rho1 = np.asarray(rho1)
    return (
        float(abs(rho1[0, 1])),
        float(rho1[0, 0].real),
        float(rho1[1, 1].real),
    )


def bloch_vector(rho1: np.ndarray) -> tuple[float, float, float]:
    """Pauli expectations (Tr sx rho1, Tr sy rho1, Tr sz rho1)."""
    rho1 = np.asarray(rho1)
    px = (rho1[0, 1] + rho1[1, 0]).real
    py = (1j * (rho1[0, 1] - rho1[1, 0])).real
    pz = (rho1[0, 0] - rho1[1, 1]).real
    return float(px), float(py), float(pz)


def spin_flip(rho: np.ndarray) -> np.ndarray:
    """(sy (x) sy) rho* (sy (x) sy), conjugation taken entrywise."""
    rho = np.asarray(rho, dtype=np.complex128)
    return _SIGMA_YY @ np.conj(rho) @ _SIGMA_YY


def purity(rho: np.ndarray) -> float:
    """Tr(rho^2); 1 for pure states, 1/4 for the maximally mixed one."""
    rho = np.asarray(rho)
    return float(np.einsum("ij,ji->", rho, rho).real)


def _sqrt_from_spectrum(w: np.ndarray, v: np.ndarray) -> np.ndarray:
    root = np.sqrt(np.clip(w, 0.0, None))
    vh = np.conj(np.swapaxes(v, -1, -2))
    return v @ (root[..., :, None] * vh)


# Eigenvalues of rho.rho_tilde below this fraction of the largest one are
# indistinguishable from eigensolver noise (~eps * lambda_1); the square
# root would blow that noise up to ~1e-8 per term, so they are zeroed.
_RELATIVE_LAMBDA_CUTOFF = 1e-12


def _concurrence_from_lambdas(lam: np.ndarray) -> np.ndarray:
    lowest = float(lam.min())
    if lowest < NEGATIVE_EIGENVALUE_FLOOR:
        raise linalg.NotPositive(
            f"concurrence eigenvalue {lowest:.3e} below "
            f"{NEGATIVE_EIGENVALUE_FLOOR:.1e}"
        )
    lam = np.clip(lam, 0.0, None)
    lam[lam < _RELATIVE_LAMBDA_CUTOFF * lam[..., :1]] = 0.0
    root = np.sqrt(lam)
    c = root[..., 0] - root[..., 1] - root[..., 2] - root[..., 3]
    return np.clip(c, 0.0, 1.0)


def concurrence_batch(states: np.ndarray) -> np.ndarray:
    """Concurrence of each state in a stack, see ``concurrence``."""
    states = np.asarray(states, dtype=np.complex128)
    w, v = linalg.eigh_batch(states, vectors=True)
    lowest = float(w.min())
    if lowest < NEGATIVE_EIGENVALUE_FLOOR:
        raise linalg.NotPositive(
            f"state eigenvalue {lowest:.3e} below {NEGATIVE_EIGENVALUE_FLOOR:.1e}"
        )
    s = _sqrt_from_spectrum(w, v)
    flipped = _SIGMA_YY @ np.conj(states) @ _SIGMA_YY
    lam = linalg.eigvalsh_batch(s @ flipped @ s)
    return _concurrence_from_lambdas(lam)


def concurrence(rho: np.ndarray) -> float:
    """Wootters concurrence of a two-qubit density matrix.

    The square roots of the descending eigenvalues of rho.rho_tilde are
    combined as max(r1 - r2 - r3 - r4, 0).  The eigenvalues are taken from
    the Hermitian matrix sqrt(rho).rho_tilde.sqrt(rho), whose spectrum is
    the same, so the Jacobi solver covers this too.
    """
    return float(concurrence_batch(np.asarray(rho)[None])[0])


def _record_arrays(times: np.ndarray, states: np.ndarray):
    rho1 = np.einsum("sikjk->sij", states.reshape(-1, 2, 2, 2, 2))
    ee = rho1[:, 0, 0].real
    gg = rho1[:, 1, 1].real
    coher = np.abs(rho1[:, 0, 1])
    px = (rho1[:, 0, 1] + rho1[:, 1, 0]).real
    py = (1j * (rho1[:, 0, 1] - rho1[:, 1, 0])).real
    pz = ee - gg
    pur = np.einsum("sij,sji->s", states, states).real

    w, v = linalg.eigh_batch(states, vectors=True)
    lowest = float(w.min())
    if lowest < NEGATIVE_EIGENVALUE_FLOOR:
        raise linalg.NotPositive(
            f"state eigenvalue {lowest:.3e} below {NEGATIVE_EIGENVALUE_FLOOR:.1e}"
        )
    s = _sqrt_from_spectrum(w, v)
    flipped = _SIGMA_YY @ np.conj(states) @ _SIGMA_YY
    lam = linalg.eigvalsh_batch(s @ flipped @ s)
    conc = _concurrence_from_lambdas(lam)
    return (ee, gg, coher, px, py, pz, conc, pur), w[:, -1]


def batch_observables(
    times: np.ndarray, states: np.ndarray
) -> tuple[list[ObservableRecord], np.ndarray]:
    """Records for a stack of sampled states.

    Also returns each state's smallest eigenvalue, a byproduct of the
    concurrence computation that the integrator reuses for its positivity
    audit.
    """
    times = np.asarray(times, dtype=float)
    states = np.asarray(states, dtype=np.complex128)
    if states.ndim != 3 or states.shape[0] != times.shape[0]:
        raise ValueError("times and states must align")
    cols, min_eigs = _record_arrays(times, states)
    ee, gg, coher, px, py, pz, conc, pur = cols
    records = [
        ObservableRecord(
            t=float(times[i]),
            rho1_ee=float(ee[i]),
            rho1_gg=float(gg[i]),
            abs_rho_eg=float(coher[i]),
            px=float(px[i]),
            py=float(py[i]),
            pz=float(pz[i]),
            concurrence=float(conc[i]),
            purity=float(pur[i]),
        )
        for i in range(times.shape[0])
    ]
    return records, min_eigs
