import math

import numpy as np
import pytest

from qcluster import kernels
from qcluster.cluster import symmetric_eig


def random_pairs(m, k, n, seed):
    rng = np.random.default_rng(seed)
    return rng.uniform(0, math.pi, (m, n)), rng.uniform(0, math.pi, (k, n))


def closed_form(X, C):
    return np.prod(np.cos(X[:, None, :] - C[None, :, :]) ** 2, axis=2)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_swap_test_p0_law(backend, n):
    X, C = random_pairs(20, 5, n, n)
    p0 = backend.swap_test_p0(X, C)
    np.testing.assert_allclose(p0, 0.5 * (1 + closed_form(X, C)), atol=1e-12)


@pytest.mark.parametrize("n", [1, 2, 4])
def test_kernel_p0(backend, n):
    X, C = random_pairs(20, 5, n, 10 + n)
    np.testing.assert_allclose(backend.kernel_p0(X, C), closed_form(X, C), atol=1e-12)
    first = backend.kernel_p0(X, C, first_qubit=True)
    np.testing.assert_allclose(first, np.cos(X[:, None, 0] - C[None, :, 0]) ** 2, atol=1e-12)


def test_backends_agree():
    backends = kernels.available_backends()
    if len(backends) < 2:
        pytest.skip("compiled extension not built")
    cy, py = backends["cython"], backends["python"]
    X, C = random_pairs(300, 4, 2, 0)
    np.testing.assert_allclose(cy.swap_test_p0(X, C), py.swap_test_p0(X, C), atol=1e-14)
    np.testing.assert_allclose(cy.kernel_p0(X, C), py.kernel_p0(X, C), atol=1e-14)
    A = np.random.default_rng(1).normal(size=(30, 30))
    A = A + A.T
    wc = np.sort(cy.jacobi_eigh(np.ascontiguousarray(A))[0])
    wp = np.sort(py.jacobi_eigh(np.ascontiguousarray(A))[0])
    np.testing.assert_allclose(wc, wp, atol=1e-10)


@pytest.mark.parametrize("n", [1, 2, 7, 20, 33])
def test_jacobi_reconstructs(backend, n):
    rng = np.random.default_rng(n)
    A = rng.normal(size=(n, n))
    A = np.ascontiguousarray(A + A.T)
    w, v, sweeps = backend.jacobi_eigh(A)
    assert sweeps < 100
    np.testing.assert_allclose(v @ np.diag(w) @ v.T, A, atol=1e-10)
    np.testing.assert_allclose(v.T @ v, np.eye(n), atol=1e-10)
    # numpy is an oracle only
    np.testing.assert_allclose(np.sort(w), np.linalg.eigvalsh(A), atol=1e-10)


def test_jacobi_on_diagonal_and_degenerate(backend):
    D = np.ascontiguousarray(np.diag([3.0, -1.0, 2.0]))
    w, v, sweeps = backend.jacobi_eigh(D)
    np.testing.assert_allclose(w, [3.0, -1.0, 2.0])
    np.testing.assert_allclose(v, np.eye(3))
    w, _, _ = backend.jacobi_eigh(np.ones((4, 4)))
    np.testing.assert_allclose(np.sort(w), [0, 0, 0, 4], atol=1e-12)


def test_symmetric_eig_sorted_and_sign_fixed():
    rng = np.random.default_rng(5)
    A = rng.normal(size=(20, 20))
    A = A + A.T
    w, v = symmetric_eig(A)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose(v @ np.diag(w) @ v.T, A, atol=1e-7)
    pivots = v[np.argmax(np.abs(v), axis=0), np.arange(20)]
    assert np.all(pivots > 0)


def test_symmetric_eig_rejects_bad_matrices():
    from qcluster.errors import UsageError

    with pytest.raises(UsageError):
        symmetric_eig(np.zeros((2, 3)))
    with pytest.raises(UsageError):
        symmetric_eig([[1.0, 2.0], [0.0, 1.0]])
    with pytest.raises(UsageError):
        symmetric_eig([[np.nan, 0.0], [0.0, 1.0]])


def test_symmetric_eig_warns_at_sweep_limit():
    A = np.random.default_rng(0).normal(size=(10, 10))
    with pytest.warns(RuntimeWarning):
        symmetric_eig(A + A.T, max_sweeps=1)
