import numpy as np
import pytest

from irsofdm.linalg import eigh_hermitian


def random_hermitian(n, rng):
    a = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return 0.5 * (a + a.conj().T)


def test_diagonal_matrix():
    w, v = eigh_hermitian(np.diag([3.0, -1.0, 2.0]).astype(complex))
    np.testing.assert_allclose(w, [3.0, 2.0, -1.0])
    np.testing.assert_allclose(np.abs(v), np.eye(3)[:, [0, 2, 1]], atol=1e-14)


def test_known_2x2():
    a = np.array([[2.0, 1j], [-1j, 2.0]])
    w, v = eigh_hermitian(a)
    np.testing.assert_allclose(w, [3.0, 1.0], atol=1e-14)
    for i in range(2):
        np.testing.assert_allclose(a @ v[:, i], w[i] * v[:, i], atol=1e-13)


def test_matches_numpy_many_sizes():
    rng = np.random.default_rng(2)
    for n in (1, 2, 3, 5, 8, 13, 21, 40):
        a = random_hermitian(n, rng)
        w, v = eigh_hermitian(a)
        ref = np.sort(np.linalg.eigvalsh(a))[::-1]
        np.testing.assert_allclose(w, ref, atol=1e-10 * max(1, n))
        # residual and orthonormality at machine precision
        assert np.linalg.norm(a @ v - v * w) <= 1e-11 * max(1.0, abs(w[0]))
        np.testing.assert_allclose(v.conj().T @ v, np.eye(n), atol=1e-12)


def test_descending_order_and_real_eigenvalues():
    rng = np.random.default_rng(4)
    a = random_hermitian(12, rng)
    w, _ = eigh_hermitian(a)
    assert w.dtype == np.float64
    assert np.all(np.diff(w) <= 1e-12)


def test_psd_gram_matrix():
    rng = np.random.default_rng(6)
    b = rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3))
    a = b @ b.conj().T  # rank 3 PSD
    w, v = eigh_hermitian(a)
    assert np.all(w >= -1e-11)
    np.testing.assert_allclose(w[3:], 0.0, atol=1e-11)
    np.testing.assert_allclose((v * w) @ v.conj().T, a, atol=1e-11)


def test_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eigh_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex))
    with pytest.raises(ValueError):
        eigh_hermitian(np.ones((2, 3), dtype=complex))


def test_trace_and_frobenius_preserved():
    rng = np.random.default_rng(8)
    a = random_hermitian(15, rng)
    w, _ = eigh_hermitian(a)
    assert np.sum(w) == pytest.approx(np.trace(a).real, abs=1e-11)
    assert np.sum(w ** 2) == pytest.approx(
        np.linalg.norm(a, "fro") ** 2, rel=1e-12)
