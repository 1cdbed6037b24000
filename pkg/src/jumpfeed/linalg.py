"""Dense complex linear algebra for the 2x2 and 4x4 operators of the model.

The simulator only ever touches single-qubit (2x2) and two-qubit (4x4)
matrices, so the Hermitian eigenproblem is solved with a cyclic Jacobi
sweep instead of a general-purpose eigensolver.  A batched variant runs the
same rotations over a whole stack of matrices at once; the observables
pipeline uses it to process thousands of sampled states per call.
"""
from __future__ import annotations

import numpy as np

__all__ = [
    "NotHermitian",
    "NotPositive",
    "kron",
    "dagger",
    "hermitian_eigenvalues",
    "hermitian_sqrt",
    "eigh_batch",
    "eigvalsh_batch",
]

# Jacobi termination: off-diagonal Frobenius norm below this is "diagonal".
_CONV_TOL = 1e-12
_MAX_SWEEPS = 60
# Pivots below this magnitude are skipped; rotating them does nothing at the
# convergence tolerance and complex division by denormals overflows.
_PIVOT_SKIP = 1e-100

# Eigenvalues of a nominally PSD matrix may dip this far below zero before
# it is treated as an input error rather than integrator roundoff.
NEGATIVE_EIGENVALUE_FLOOR = -1e-9


class NotHermitian(ValueError):
    """Input matrix is not Hermitian within tolerance."""


class NotPositive(ValueError):
    """Input matrix has an eigenvalue below the admissible roundoff floor."""


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product a (x) b; block (i, j) equals a[i, j] * b."""
    a = np.asarray(a, dtype=np.complex128)
    b = np.asarray(b, dtype=np.complex128)
    if a.ndim != 2 or b.ndim != 2:
        raise ValueError("kron expects two matrices")
    return np.kron(a, b)


def dagger(a: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return np.conj(a).T


def _hermitian_deviation(a: np.ndarray) -> float:
    return float(np.max(np.abs(a - dagger(a))))


def _require_hermitian(a: np.ndarray, tol: float = 1e-10) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise NotHermitian(f"expected a square matrix, got shape {a.shape}")
    dev = _hermitian_deviation(a)
    if dev > tol:
        raise NotHermitian(f"max |a - a^dag| = {dev:.3e} exceeds {tol:.1e}")
    return a


def _pivot_pairs(n: int) -> tuple[tuple[int, int], ...]:
    return tuple((p, q) for p in range(n - 1) for q in range(p + 1, n))


def eigh_batch(mats: np.ndarray, vectors: bool = True):
    """Eigendecomposition of a stack of Hermitian matrices by cyclic Jacobi.

    Accepts shape (n, n) or (m, n, n).  Returns eigenvalues sorted in
    descending order, and (unless ``vectors=False``) the matching unitary
    eigenvector columns, so that ``v @ diag(w) @ v^dag`` reconstructs the
    input.  Each plane rotation first absorbs the pivot's phase, reducing
    the step to the textbook real rotation.
    """
    a = np.array(mats, dtype=np.complex128)
    single = a.ndim == 2
    if single:
        a = a[None]
    m, n, n2 = a.shape
    if n != n2:
        raise ValueError(f"expected square matrices, got shape {a.shape}")
    pivots = _pivot_pairs(n)
    diag = range(n)
    v = None
    if vectors:
        v = np.zeros_like(a)
        v[:, diag, diag] = 1.0
    for _ in range(_MAX_SWEEPS):
        off2 = np.zeros(m)
        for p, q in pivots:
            off2 += np.abs(a[:, p, q]) ** 2
        if float(np.max(off2)) < 0.5 * _CONV_TOL * _CONV_TOL:
            break
        for p, q in pivots:
            apq = a[:, p, q]
            mag = np.abs(apq)
            active = mag > _PIVOT_SKIP
            if not np.any(active):
                continue
            safe_mag = np.where(active, mag, 1.0)
            phase = np.where(active, apq / safe_mag, 1.0)
            tau = (a[:, q, q].real - a[:, p, p].real) / (2.0 * safe_mag)
            with np.errstate(over="ignore"):
                t = 1.0 / (np.abs(tau) + np.sqrt(1.0 + tau * tau))
            t = np.where(tau < 0.0, -t, t)
            t = np.where(active, t, 0.0)
            c = 1.0 / np.sqrt(1.0 + t * t)
            s = t * c
            pc = np.conj(phase)
            cb = c[:, None]
            sb = s[:, None]
            spc = (s * pc)[:, None]
            cpc = (c * pc)[:, None]
            cp = a[:, :, p].copy()
            cq = a[:, :, q].copy()
            a[:, :, p] = cb * cp - spc * cq
            a[:, :, q] = sb * cp + cpc * cq
            sph = (s * phase)[:, None]
            cph = (c * phase)[:, None]
            rp = a[:, p, :].copy()
            rq = a[:, q, :].copy()
            a[:, p, :] = cb * rp - sph * rq
            a[:, q, :] = sb * rp + cph * rq
            a[:, p, q] = 0.0
            a[:, q, p] = 0.0
            a[:, p, p] = a[:, p, p].real
            a[:, q, q] = a[:, q, q].real
            if vectors:
                vp = v[:, :, p].copy()
                vq = v[:, :, q].copy()
                v[:, :, p] = cb * vp - spc * vq
                v[:, :, q] = sb * vp + cpc * vq
    else:
        raise RuntimeError(
            f"jacobi sweep did not converge within {_MAX_SWEEPS} sweeps"
        )
    w = a[:, diag, diag].real.copy()
    order = np.argsort(-w, axis=1, kind="stable")
    w = np.take_along_axis(w, order, axis=1)
    if vectors:
        v = np.take_along_axis(v, order[:, None, :], axis=2)
    if single:
        return (w[0], v[0]) if vectors else (w[0], None)
    return (w, v) if vectors else (w, None)


def eigvalsh_batch(mats: np.ndarray) -> np.ndarray:
    """Descending eigenvalues of a stack of Hermitian matrices."""
    w, _ = eigh_batch(mats, vectors=False)
    return w


def hermitian_eigenvalues(a: np.ndarray) -> np.ndarray:
    """Real eigenvalues of a Hermitian matrix, sorted in descending order.

    Raises NotHermitian if max |a - a^dag| exceeds 1e-10.
    """
    a = _require_hermitian(a)
    w, _ = eigh_batch(a, vectors=False)
    return w


def hermitian_sqrt(a: np.ndarray) -> np.ndarray:
    """Hermitian PSD square root s with s @ s = a.

    Eigenvalues in [NEGATIVE_EIGENVALUE_FLOOR, 0) are clamped to zero;
    anything lower raises NotPositive.
    """
    a = _require_hermitian(a)
    w, v = eigh_batch(a, vectors=True)
    lowest = float(w.min())
    if lowest < NEGATIVE_EIGENVALUE_FLOOR:
        raise NotPositive(
            f"eigenvalue {lowest:.3e} below {NEGATIVE_EIGENVALUE_FLOOR:.1e}"
        )
    root = np.sqrt(np.clip(w, 0.0, None))
    s = (v * root) @ dagger(v)
    return 0.5 * (s + dagger(s))
