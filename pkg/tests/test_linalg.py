import numpy as np
import pytest

from jumpfeed.linalg import (
    NotHermitian,
    NotPositive,
    dagger,
    eigh_batch,
    eigvalsh_batch,
    hermitian_eigenvalues,
    hermitian_sqrt,
    kron,
)
from jumpfeed.model import IDENTITY2, SIGMA_MINUS, SIGMA_PLUS, SIGMA_X, SIGMA_Z

from conftest import random_hermitian

I2 = np.eye(2)
I4 = np.eye(4)


def test_kron_identity():
    assert np.array_equal(kron(I2, I2), I4)


def test_kron_lifts_sigma_minus():
    lifted = kron(IDENTITY2, SIGMA_MINUS)
    expected = np.zeros((4, 4))
    expected[1, 0] = 1.0
    expected[3, 2] = 1.0
    assert np.array_equal(lifted, expected)


def test_kron_lifts_sigma_z():
    assert np.array_equal(kron(SIGMA_Z, IDENTITY2), np.diag([1.0, 1.0, -1.0, -1.0]))


def test_kron_dimension_law(rng):
    for _ in range(20):
        a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
        k = kron(a, b)
        assert k.shape == (4, 4)
        for i in range(2):
            for j in range(2):
                block = k[2 * i : 2 * i + 2, 2 * j : 2 * j + 2]
                assert np.allclose(block, a[i, j] * b, atol=0, rtol=1e-15)


def test_dagger_examples():
    assert np.array_equal(dagger(I2), I2)
    assert np.array_equal(dagger(SIGMA_MINUS), SIGMA_PLUS)
    assert np.array_equal(dagger(1j * SIGMA_X), -1j * SIGMA_X)


def test_dagger_involution_and_product_rule(rng):
    for _ in range(20):
        a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        assert np.array_equal(dagger(dagger(a)), a)
        assert np.max(np.abs(dagger(a @ b) - dagger(b) @ dagger(a))) < 1e-12


def test_eigenvalues_examples():
    assert np.allclose(hermitian_eigenvalues(np.diag([1.0, 2.0])), [2.0, 1.0])
    assert np.allclose(hermitian_eigenvalues(SIGMA_X), [1.0, -1.0], atol=1e-14)
    assert np.allclose(hermitian_eigenvalues(0.25 * I4), [0.25] * 4)


def test_eigenvalues_sum_matches_trace(rng):
    for _ in range(50):
        h = random_hermitian(rng)
        w = hermitian_eigenvalues(h)
        assert list(w) == sorted(w, reverse=True)
        assert abs(w.sum() - np.trace(h).real) < 1e-9


def test_eigenvalues_match_lapack(rng):
    # independent oracle: numpy's LAPACK path never feeds the Jacobi code
    for _ in range(50):
        h = random_hermitian(rng)
        w = hermitian_eigenvalues(h)
        ref = np.sort(np.linalg.eigvalsh(h))[::-1]
        assert np.max(np.abs(w - ref)) < 1e-11


def test_eigenvalues_reject_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_eigenvalues(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_sqrt_examples():
    assert np.allclose(hermitian_sqrt(I4), I4, atol=1e-14)
    assert np.allclose(hermitian_sqrt(np.diag([4.0, 1.0])), np.diag([2.0, 1.0]), atol=1e-14)
    proj = np.diag([1.0, 0.0])
    assert np.allclose(hermitian_sqrt(proj), proj, atol=1e-14)


def test_sqrt_squares_back(rng):
    for _ in range(30):
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        a = m @ m.conj().T
        s = hermitian_sqrt(a)
        assert np.max(np.abs(s - dagger(s))) == 0.0
        assert np.max(np.abs(s @ s - a)) < 1e-8 * max(1.0, np.abs(a).max())


def test_sqrt_rejects_negative_eigenvalue():
    with pytest.raises(NotPositive):
        hermitian_sqrt(np.diag([1.0, -1e-6]))


def test_sqrt_clamps_tiny_negative():
    s = hermitian_sqrt(np.diag([1.0, -1e-10]))
    assert np.allclose(s, np.diag([1.0, 0.0]), atol=1e-5)


def test_sqrt_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        hermitian_sqrt(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_batch_matches_scalar_and_lapack(rng):
    mats = np.stack([random_hermitian(rng) for _ in range(64)])
    w, v = eigh_batch(mats)
    w2 = eigvalsh_batch(mats)
    assert np.max(np.abs(w - w2)) < 1e-12
    for i in range(mats.shape[0]):
        ref = np.sort(np.linalg.eigvalsh(mats[i]))[::-1]
        assert np.max(np.abs(w[i] - ref)) < 1e-11
        recon = v[i] @ np.diag(w[i]) @ dagger(v[i])
        assert np.max(np.abs(recon - mats[i])) < 1e-11
        unit = dagger(v[i]) @ v[i]
        assert np.max(np.abs(unit - I4)) < 1e-12
