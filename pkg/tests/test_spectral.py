import numpy as np
import pytest

from qcluster.cluster import (
    KMeansConfig,
    SpectralConfig,
    kmeans_restarts,
    spectral_cluster,
    spectral_embedding,
    symmetric_eig,
)
from qcluster.cluster.spectral import default_sigma, laplacian
from qcluster.errors import ConfigurationError
from qcluster.metrics import adjusted_rand_index


def rings(m=60, seed=0):
    rng = np.random.default_rng(seed)
    half = m // 2
    theta = rng.uniform(0, 2 * np.pi, m)
    radius = np.r_[np.full(half, 1.0), np.full(m - half, 5.0)] + 0.1 * rng.normal(size=m)
    data = np.c_[radius * np.cos(theta), radius * np.sin(theta)]
    return data, np.r_[np.zeros(half, int), np.ones(m - half, int)]


def test_two_far_pairs():
    data = np.array([[0.0, 0.0], [0.0, 0.1], [10.0, 0.0], [10.0, 0.1]])
    res = spectral_cluster(data, SpectralConfig(k=2, sigma=1.0))
    assert adjusted_rand_index(res.assignments, [0, 0, 1, 1]) == 1.0


def test_laplacian_null_space():
    rng = np.random.default_rng(0)
    data = rng.normal(size=(15, 2))
    L = laplacian(data, default_sigma(data))
    w, v = symmetric_eig(L)
    assert w[0] == pytest.approx(0.0, abs=1e-10)
    assert np.all(w > -1e-10) and np.all(w < 2 + 1e-10)
    A = np.exp(-((data[:, None] - data[None]) ** 2).sum(-1) / (2 * default_sigma(data) ** 2))
    np.fill_diagonal(A, 0)
    d = np.sqrt(A.sum(1))
    np.testing.assert_allclose(np.abs(v[:, 0]), d / np.linalg.norm(d), atol=1e-8)


def test_unnormalized_laplacian_rows_sum_to_zero():
    data = np.random.default_rng(1).normal(size=(10, 2))
    L = laplacian(data, 1.0, "unnormalized")
    np.testing.assert_allclose(L.sum(axis=1), 0.0, atol=1e-12)


def test_isolated_vertex_warns():
    data = np.array([[0.0], [0.01], [1e6]])
    with pytest.warns(RuntimeWarning):
        laplacian(data, 0.1)


def test_embedding_rows_are_unit():
    data, _ = rings(40, 2)
    emb = spectral_embedding(data, SpectralConfig(k=2))
    np.testing.assert_allclose(np.linalg.norm(emb, axis=1), 1.0, atol=1e-12)


def test_concentric_rings():
    data, truth = rings()
    spec = spectral_cluster(data, SpectralConfig(k=2, sigma=0.5))
    km = kmeans_restarts(data, KMeansConfig(k=2), restarts=10)
    assert adjusted_rand_index(spec.assignments, truth) >= 0.9
    assert adjusted_rand_index(km.assignments, truth) <= 0.5


def test_spectral_deterministic():
    data, _ = rings(30, 3)
    a = spectral_cluster(data, SpectralConfig(k=2, seed=4))
    b = spectral_cluster(data, SpectralConfig(k=2, seed=4))
    np.testing.assert_array_equal(a.assignments, b.assignments)


def test_default_sigma():
    assert default_sigma(np.array([[0.0], [1.0], [3.0]])) == pytest.approx(2.0)
    assert default_sigma(np.zeros((3, 1))) == 1.0


def test_bad_config():
    with pytest.raises(ConfigurationError):
        SpectralConfig(k=2, sigma=0.0)
    with pytest.raises(ConfigurationError):
        SpectralConfig(k=2, laplacian="random_walk")
    with pytest.raises(ConfigurationError):
        spectral_embedding(np.zeros((2, 1)), SpectralConfig(k=3))


@pytest.mark.parametrize("seed", range(5))
def test_jacobi_reconstruction_20x20(seed):
    A = np.random.default_rng(seed).normal(size=(20, 20))
    A = A + A.T
    w, v = symmetric_eig(A)
    np.testing.assert_allclose(v @ np.diag(w) @ v.T, A, atol=1e-7)
