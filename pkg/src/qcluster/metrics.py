"""Internal clustering quality indices and the adjusted Rand index.

All distances are Euclidean on the features as given. Conventions for
degenerate partitions:

* silhouette: points in singleton clusters score 0, and so does a point
  with ``a = b = 0``;
* Davies-Bouldin: a singleton cluster has spread 0; coincident centroids
  raise :class:`MetricUndefinedError` instead of returning infinity;
* Calinski-Harabasz: zero within-cluster dispersion raises.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import MetricUndefinedError, UsageError


@dataclass(frozen=True)
class MetricReport:
    silhouette: float
    davies_bouldin: float
    calinski_harabasz: float
    k: int
    m: int

    def as_dict(self) -> dict:
        return asdict(self)


def _prepare(data, assignments) -> tuple[np.ndarray, np.ndarray, int]:
    x = np.asarray(data, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    labels = np.asarray(assignments)
    if labels.shape != (x.shape[0],):
        raise UsageError("need one assignment per data row")
    # relabel to 0..k-1 over the clusters actually present
    _, labels = np.unique(labels, return_inverse=True)
    k = int(labels.max()) + 1 if labels.size else 0
    if k < 2:
        raise MetricUndefinedError(f"metric needs at least 2 non-empty clusters, got {k}")
    return x, labels, k


def _centroids(x: np.ndarray, labels: np.ndarray, k: int) -> tuple[np.ndarray, np.ndarray]:
    counts = np.bincount(labels, minlength=k)
    sums = np.zeros((k, x.shape[1]))
    np.add.at(sums, labels, x)
    return sums / counts[:, None], counts


def silhouette(data, assignments) -> float:
    x, labels, k = _prepare(data, assignments)
    # direct differences: the dot-product expansion loses digits on near-duplicates
    dist = np.linalg.norm(x[:, None, :] - x[None, :, :], axis=2)
    counts = np.bincount(labels, minlength=k)
    onehot = np.zeros((x.shape[0], k))
    onehot[np.arange(x.shape[0]), labels] = 1.0
    sums = dist @ onehot  # total distance from each point to each cluster
    own = counts[labels]
    with np.errstate(invalid="ignore", divide="ignore"):
        a = sums[np.arange(x.shape[0]), labels] / (own - 1)
        mean_other = sums / counts[None, :]
    mean_other[np.arange(x.shape[0]), labels] = np.inf
    b = mean_other.min(axis=1)
    denom = np.maximum(a, b)
    with np.errstate(invalid="ignore", divide="ignore"):
        s = np.where((own > 1) & (denom > 0), (b - a) / denom, 0.0)
    return float(np.mean(s))


def davies_bouldin(data, assignments) -> float:
    x, labels, k = _prepare(data, assignments)
    cent, _ = _centroids(x, labels, k)
    spread = np.zeros(k)
    np.add.at(spread, labels, np.linalg.norm(x - cent[labels], axis=1))
    spread /= np.bincount(labels, minlength=k)
    sep = np.linalg.norm(cent[:, None, :] - cent[None, :, :], axis=2)
    off = ~np.eye(k, dtype=bool)
    if np.any(sep[off] == 0.0):
        raise MetricUndefinedError("Davies-Bouldin undefined: two clusters share a centroid")
    ratio = np.where(off, (spread[:, None] + spread[None, :]) / np.where(off, sep, 1.0), -np.inf)
    return float(np.mean(ratio.max(axis=1)))


def calinski_harabasz(data, assignments) -> float:
    x, labels, k = _prepare(data, assignments)
    m = x.shape[0]
    if k >= m:
        raise MetricUndefinedError("Calinski-Harabasz undefined for k = M")
    cent, counts = _centroids(x, labels, k)
    between = float(np.sum(counts * np.sum((cent - x.mean(axis=0)) ** 2, axis=1)))
    within = float(np.sum((x - cent[labels]) ** 2))
    if within == 0.0:
        raise MetricUndefinedError("Calinski-Harabasz undefined: zero within-cluster dispersion")
    return (between / (k - 1)) / (within / (m - k))


def metric_report(data, assignments) -> MetricReport:
    x, labels, k = _prepare(data, assignments)
    return MetricReport(
        silhouette=silhouette(x, labels),
        davies_bouldin=davies_bouldin(x, labels),
        calinski_harabasz=calinski_harabasz(x, labels),
        k=k,
        m=x.shape[0],
    )


def _comb2(n):
    n = np.asarray(n, dtype=float)
    return n * (n - 1) / 2.0


def adjusted_rand_index(labels_a, labels_b) -> float:
    """Chance-corrected pair-counting agreement between two partitions."""
    a = np.asarray(labels_a)
    b = np.asarray(labels_b)
    if a.shape != b.shape or a.ndim != 1:
        raise UsageError("label arrays must be 1-D and of equal length")
    _, ai = np.unique(a, return_inverse=True)
    _, bi = np.unique(b, return_inverse=True)
    table = np.zeros((ai.max() + 1, bi.max() + 1)) if a.size else np.zeros((1, 1))
    np.add.at(table, (ai, bi), 1)
    index = _comb2(table).sum()
    rows = _comb2(table.sum(axis=1)).sum()
    cols = _comb2(table.sum(axis=0)).sum()
    total = float(_comb2(a.size))
    if total == 0:
        return 1.0
    expected = rows * cols / total
    max_index = 0.5 * (rows + cols)
    if max_index == expected:
        return 1.0
    return float((index - expected) / (max_index - expected))
