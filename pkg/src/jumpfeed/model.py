"""Two-qubit model: Hamiltonian, decay channel and jump-feedback generators.

Conventions used everywhere in this package (hbar = 1):

* two-qubit basis order |ee>, |eg>, |ge>, |gg> (qubit 1 tensor qubit 2,
  local order |e> then |g>), so index = 2*i1 + i2 with e -> 0, g -> 1;
* qubit 2 is the dissipative one, its lowering operator lifted as
  I (x) sigma_minus;
* the feedback unitary acts on qubit 2 only and is applied right after a
  detected emission, which turns the decay channel L = sigma2_minus of the
  plain master equation into F.L in the controlled one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import dagger, hermitian_eigenvalues, kron

__all__ = [
    "SystemParams",
    "FeedbackVector",
    "RotationForm",
    "SIGMA_X",
    "SIGMA_Y",
    "SIGMA_Z",
    "SIGMA_PLUS",
    "SIGMA_MINUS",
    "IDENTITY2",
    "IDENTITY4",
    "SIGMA2_MINUS",
    "SIGMA2_PLUS",
    "build_hamiltonian",
    "build_feedback_unitary",
    "jump_operator",
    "rotation_to_amplitudes",
    "lindblad_rhs",
    "feedback_rhs",
    "validate_density_matrix",
]


def _frozen(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.complex128)
    m.setflags(write=False)
    return m


SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[1, 0], [0, -1]])
SIGMA_PLUS = _frozen([[0, 1], [0, 0]])   # |e><g|
SIGMA_MINUS = _frozen([[0, 0], [1, 0]])  # |g><e|
IDENTITY2 = _frozen(np.eye(2))
IDENTITY4 = _frozen(np.eye(4))

SIGMA2_MINUS = _frozen(kron(IDENTITY2, SIGMA_MINUS))
SIGMA2_PLUS = _frozen(kron(IDENTITY2, SIGMA_PLUS))
# diag of sigma2_plus @ sigma2_minus: excited-qubit-2 projector
_DECAY_DIAG = np.array([1.0, 0.0, 1.0, 0.0])
_DECAY_DIAG.setflags(write=False)


@dataclass(frozen=True)
class SystemParams:
    """Physical constants, in units of the common qubit frequency omega."""

    omega1: float = 1.0
    omega2: float = 1.0
    g: float = 1.0
    gamma: float = 0.5

    def __post_init__(self):
        for name in ("omega1", "omega2", "g", "gamma"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")
        if self.omega1 <= 0 or self.omega2 <= 0:
            raise ValueError("qubit frequencies must be positive")
        if self.g < 0 or self.gamma < 0:
            raise ValueError("g and gamma must be non-negative")


@dataclass(frozen=True)
class FeedbackVector:
    """Pauli amplitudes (ax, ay, az) of the post-jump control rotation."""

    ax: float = 0.0
    ay: float = 0.0
    az: float = 0.0

    def __post_init__(self):
        for name in ("ax", "ay", "az"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    def norm(self) -> float:
        return math.sqrt(self.ax**2 + self.ay**2 + self.az**2)


@dataclass(frozen=True)
class RotationForm:
    """The same control as a Bloch rotation: angle about axis (theta, phi)."""

    angle: float
    theta: float
    phi: float

    def __post_init__(self):
        if not (0.0 <= self.theta <= math.pi):
            raise ValueError("theta must lie in [0, pi]")
        if not (0.0 <= self.phi < 2.0 * math.pi):
            raise ValueError("phi must lie in [0, 2*pi)")
        if not math.isfinite(self.angle):
            raise ValueError("angle must be finite")


@lru_cache(maxsize=256)
def _hamiltonian_cached(p: SystemParams) -> np.ndarray:
    h = (
        0.5 * p.omega1 * kron(SIGMA_Z, IDENTITY2)
        + 0.5 * p.omega2 * kron(IDENTITY2, SIGMA_Z)
        + p.g * (kron(SIGMA_PLUS, SIGMA_MINUS) + kron(SIGMA_MINUS, SIGMA_PLUS))
    )
    return _frozen(h)


def build_hamiltonian(p: SystemParams) -> np.ndarray:
    """Exchange-coupled two-qubit Hamiltonian.

    (omega1/2) sz (x) I + (omega2/2) I (x) sz
    + g (s+ (x) s-  +  s- (x) s+)
    """
    return _hamiltonian_cached(p).copy()


@lru_cache(maxsize=256)
def _feedback_cached(f: FeedbackVector) -> tuple[np.ndarray, np.ndarray]:
    a = f.norm()
    if a < 1e-8:
        # removes the 0/0 at zero amplitude: sin(a)/a ~ 1 - a^2/6
        sinc = 1.0 - a * a / 6.0
    else:
        sinc = math.sin(a) / a
    pauli_part = f.ax * SIGMA_X + f.ay * SIGMA_Y + f.az * SIGMA_Z
    f2 = math.cos(a) * IDENTITY2 + 1j * sinc * pauli_part
    return _frozen(f2), _frozen(kron(IDENTITY2, f2))


def build_feedback_unitary(f: FeedbackVector) -> tuple[np.ndarray, np.ndarray]:
    """Control unitary exp(i A.sigma) on qubit 2, and its two-qubit lift.

    Returns ``(f2, f4)`` with f2 = cos|A| I + i (sin|A|/|A|) A.sigma and
    f4 = I (x) f2.
    """
    f2, f4 = _feedback_cached(f)
    return f2.copy(), f4.copy()


@lru_cache(maxsize=256)
def _jump_cached(f: FeedbackVector) -> tuple[np.ndarray, np.ndarray]:
    _, f4 = _feedback_cached(f)
    j = f4 @ SIGMA2_MINUS
    return _frozen(j), _frozen(dagger(j))


def jump_operator(f: FeedbackVector) -> np.ndarray:
    """Controlled collapse operator F.(I (x) sigma_minus)."""
    return _jump_cached(f)[0].copy()


def rotation_to_amplitudes(r: RotationForm) -> FeedbackVector:
    """Convert a Bloch rotation (angle about axis n) to Pauli amplitudes.

    With n = (sin t cos p, sin t sin p, cos t) the amplitudes are
    A_k = -(angle/2) n_k, so that exp(i A.sigma) = exp(-i (angle/2) n.sigma).
    """
    half = 0.5 * r.angle
    st = math.sin(r.theta)
    return FeedbackVector(
        ax=-half * st * math.cos(r.phi),
        ay=-half * st * math.sin(r.phi),
        az=-half * math.cos(r.theta),
    )


def _master_rhs(rho, h, jump, jump_dag, gamma):
    comm = h @ rho - rho @ h
    hop = jump @ rho @ jump_dag
    damp = _DECAY_DIAG[:, None] * rho + rho * _DECAY_DIAG
    return -1j * comm + gamma * (hop - 0.5 * damp)


def lindblad_rhs(rho: np.ndarray, p: SystemParams) -> np.ndarray:
    """Uncontrolled master-equation right-hand side.

    -i[H, rho] + gamma (L rho L+ - {L+ L, rho}/2) with L = I (x) sigma_minus.
    """
    return _master_rhs(rho, _hamiltonian_cached(p), SIGMA2_MINUS, SIGMA2_PLUS, p.gamma)


def feedback_rhs(rho: np.ndarray, p: SystemParams, f: FeedbackVector) -> np.ndarray:
    """Controlled master-equation right-hand side.

    Identical to ``lindblad_rhs`` except that the sandwich term uses the
    rotated channel F.L, leaving the anticommutator part untouched.
    """
    j, jd = _jump_cached(f)
    return _master_rhs(rho, _hamiltonian_cached(p), j, jd, p.gamma)


def validate_density_matrix(
    rho: np.ndarray,
    herm_tol: float = 1e-9,
    trace_tol: float = 1e-9,
    eig_floor: float = -1e-7,
) -> None:
    """Raise ValueError unless rho is a valid two-qubit density matrix."""
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        raise ValueError(f"expected a 4x4 density matrix, got shape {rho.shape}")
    dev = float(np.max(np.abs(rho - dagger(rho))))
    if dev > herm_tol:
        raise ValueError(f"density matrix not Hermitian: deviation {dev:.3e}")
    tr = complex(np.trace(rho))
    if abs(tr - 1.0) > trace_tol:
        raise ValueError(f"density matrix trace {tr:.12g} != 1")
    # symmetrize first: herm_tol may exceed the eigensolver's own tolerance
    low = float(hermitian_eigenvalues(0.5 * (rho + dagger(rho)))[-1])
    if low < eig_floor:
        raise ValueError(f"density matrix eigenvalue {low:.3e} below {eig_floor:.1e}")
