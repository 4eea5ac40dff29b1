"""Spectral clustering on a Gaussian affinity graph."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..errors import ConfigurationError
from .eig import symmetric_eig
from .kmeans import ClusteringResult, KMeansConfig, as_dataset, kmeans_restarts

DEGREE_FLOOR = 1e-12


@dataclass(frozen=True)
class SpectralConfig:
    """``sigma=None`` means the median pairwise distance of the data."""

    k: int
    sigma: float | None = None
    laplacian: Literal["normalized_symmetric", "unnormalized"] = "normalized_symmetric"
    seed: int = 0
    n_init: int = 10

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigurationError(f"k must be a positive integer, got {self.k!r}")
        if self.sigma is not None and not self.sigma > 0:
            raise ConfigurationError(f"sigma must be > 0, got {self.sigma!r}")
        if self.laplacian not in ("normalized_symmetric", "unnormalized"):
            raise ConfigurationError(f"unknown laplacian {self.laplacian!r}")
        if self.n_init < 1:
            raise ConfigurationError("n_init must be >= 1")


def _pairwise_sq(data: np.ndarray) -> np.ndarray:
    diff = data[:, None, :] - data[None, :, :]
    return np.einsum("ijn,ijn->ij", diff, diff)


def default_sigma(data: np.ndarray) -> float:
    """Median pairwise distance; falls back to the mean of the positive ones."""
    d = np.sqrt(_pairwise_sq(data)[np.triu_indices(data.shape[0], 1)])
    if d.size == 0:
        return 1.0
    med = float(np.median(d))
    if med > 0:
        return med
    pos = d[d > 0]
    return float(pos.mean()) if pos.size else 1.0


def laplacian(data, sigma: float, kind: str = "normalized_symmetric") -> np.ndarray:
    affinity = np.exp(-_pairwise_sq(data) / (2.0 * sigma * sigma))
    np.fill_diagonal(affinity, 0.0)
    degree = affinity.sum(axis=1)
    if kind == "unnormalized":
        return np.diag(degree) - affinity
    if np.any(degree < DEGREE_FLOOR):
        warnings.warn(
            f"{int(np.sum(degree < DEGREE_FLOOR))} isolated vertices; degree floored at {DEGREE_FLOOR}",
            RuntimeWarning,
        )
        degree = np.maximum(degree, DEGREE_FLOOR)
    inv_sqrt = 1.0 / np.sqrt(degree)
    return np.eye(data.shape[0]) - inv_sqrt[:, None] * affinity * inv_sqrt[None, :]


def spectral_embedding(data, config: SpectralConfig) -> np.ndarray:
    """Row-normalized eigenvectors of the k smallest Laplacian eigenvalues."""
    data = as_dataset(data)
    if config.k > data.shape[0]:
        raise ConfigurationError(f"k={config.k} exceeds the number of points M={data.shape[0]}")
    sigma = config.sigma if config.sigma is not None else default_sigma(data)
    _, vecs = symmetric_eig(laplacian(data, sigma, config.laplacian))
    u = vecs[:, : config.k]
    norms = np.linalg.norm(u, axis=1, keepdims=True)
    return np.divide(u, norms, out=np.zeros_like(u), where=norms > 0)


def spectral_cluster(data, config: SpectralConfig) -> ClusteringResult:
    """Cluster the spectral embedding with Euclidean K-means.

    Centroids in the returned result live in embedding space; the
    assignments index the original rows.
    """
    emb = spectral_embedding(data, config)
    return kmeans_restarts(emb, KMeansConfig(k=config.k, seed=config.seed), config.n_init)
