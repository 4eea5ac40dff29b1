"""K-means with a pluggable assignment measure.

Assignment uses either squared Euclidean distance or a quantum fidelity
(highest fidelity wins). The centroid update is always the arithmetic
mean of the members in feature space, whatever the measure.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Literal

import numpy as np

from .. import encode
from ..encode import EXACT, FidelityMode, KernelMeasurement
from ..errors import ConfigurationError, DataError, UsageError

DistanceMeasure = Literal["euclidean", "swap_test", "quantum_kernel", "analytic_fidelity"]
MEASURES = ("euclidean", "swap_test", "quantum_kernel", "analytic_fidelity")
QUANTUM_MEASURES = ("swap_test", "quantum_kernel", "analytic_fidelity")

# costs within this of the minimum count as tied; the lowest cluster index wins
TIE_TOL = 1e-12


@dataclass(frozen=True)
class KMeansConfig:
    k: int
    max_iter: int = 300
    tol: float = 1e-6
    seed: int = 0
    measure: DistanceMeasure = "euclidean"
    fidelity_mode: FidelityMode = EXACT
    kernel_measurement: KernelMeasurement = "all_zeros"
    init: Literal["random", "k-means++"] = "random"

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or self.k < 1:
            raise ConfigurationError(f"k must be a positive integer, got {self.k!r}")
        if self.max_iter < 1:
            raise ConfigurationError(f"max_iter must be >= 1, got {self.max_iter!r}")
        if not self.tol > 0:
            raise ConfigurationError(f"tol must be > 0, got {self.tol!r}")
        if self.measure not in MEASURES:
            raise ConfigurationError(f"unknown measure {self.measure!r}")
        if self.init not in ("random", "k-means++"):
            raise ConfigurationError(f"unknown init {self.init!r}")


@dataclass
class ClusteringResult:
    """Outcome of one clustering run.

    ``trace`` and ``centroid_trace`` hold the assignments and centroids
    after every iteration. ``fidelity_history`` is filled for quantum
    measures only: the total fidelity of each point to its own centroid.
    """

    centroids: np.ndarray
    assignments: np.ndarray
    iterations: int
    wcss_history: list[float]
    converged: bool
    measure: str = "euclidean"
    fidelity_history: list[float] = field(default_factory=list)
    trace: list[np.ndarray] = field(default_factory=list)
    centroid_trace: list[np.ndarray] = field(default_factory=list)

    @property
    def k(self) -> int:
        return self.centroids.shape[0]

    @property
    def total_fidelity(self) -> float | None:
        return self.fidelity_history[-1] if self.fidelity_history else None


def as_dataset(data, quantum: bool = False) -> np.ndarray:
    """Validate a data matrix (M x N, finite; within [0, pi] when ``quantum``)."""
    arr = np.asarray(data, dtype=float)
    if arr.ndim == 1:
        arr = arr[:, None]
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise DataError(f"dataset must be a non-empty M x N matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DataError("dataset contains non-finite values")
    if quantum and (arr.min() < -encode.ANGLE_SLACK or arr.max() > np.pi + encode.ANGLE_SLACK):
        raise DataError("quantum measures need features normalized to [0, pi]")
    return np.ascontiguousarray(arr)


def cost_matrix(
    data: np.ndarray,
    centroids: np.ndarray,
    measure: DistanceMeasure = "euclidean",
    fidelity_mode: FidelityMode = EXACT,
    kernel_measurement: KernelMeasurement = "all_zeros",
) -> np.ndarray:
    """Dissimilarity of every point to every centroid (lower is closer).

    Squared distance for ``euclidean``, ``1 - F`` for the fidelity measures.
    """
    if measure == "euclidean":
        diff = data[:, None, :] - centroids[None, :, :]
        return np.einsum("mkn,mkn->mk", diff, diff)
    if measure == "analytic_fidelity":
        return 1.0 - np.prod(np.cos(data[:, None, :] - centroids[None, :, :]) ** 2, axis=2)
    if measure in ("swap_test", "quantum_kernel"):
        f = encode.fidelity_matrix(data, centroids, measure, fidelity_mode, kernel_measurement)
        return 1.0 - f
    raise UsageError(f"unknown measure {measure!r}")


def _argmin_ties(cost: np.ndarray) -> np.ndarray:
    best = cost.min(axis=1, keepdims=True)
    return np.argmax(cost <= best + TIE_TOL, axis=1)


def assign_step(
    data,
    centroids,
    measure: DistanceMeasure = "euclidean",
    fidelity_mode: FidelityMode = EXACT,
    kernel_measurement: KernelMeasurement = "all_zeros",
) -> np.ndarray:
    """Index of the nearest (or highest-fidelity) centroid for every point."""
    data = as_dataset(data, measure in QUANTUM_MEASURES)
    centroids = np.atleast_2d(np.asarray(centroids, dtype=float))
    return _argmin_ties(cost_matrix(data, centroids, measure, fidelity_mode, kernel_measurement))


def update_step(data, assignments, k: int) -> np.ndarray:
    """Per-cluster mean of the members; empty clusters get a NaN row."""
    data = np.asarray(data, dtype=float)
    assignments = np.asarray(assignments)
    if assignments.shape != (data.shape[0],):
        raise UsageError("need one assignment per data row")
    if assignments.size and (assignments.min() < 0 or assignments.max() >= k):
        raise UsageError(f"assignments must lie in [0, {k})")
    counts = np.bincount(assignments, minlength=k).astype(float)
    sums = np.zeros((k, data.shape[1]))
    np.add.at(sums, assignments, data)
    with np.errstate(invalid="ignore", divide="ignore"):
        return sums / counts[:, None]


def _wcss(data: np.ndarray, labels: np.ndarray, centroids: np.ndarray) -> float:
    diff = data - centroids[labels]
    return float(np.einsum("mn,mn->", diff, diff))


def wcss(data, result: ClusteringResult) -> float:
    """Within-cluster sum of squared Euclidean distances, for any measure."""
    data = as_dataset(data)
    return _wcss(data, np.asarray(result.assignments), np.asarray(result.centroids))


def _reseed_empty(labels: np.ndarray, cost: np.ndarray, k: int) -> np.ndarray:
    counts = np.bincount(labels, minlength=k)
    if counts.min() > 0:
        return labels
    labels = labels.copy()
    own = cost[np.arange(labels.size), labels].copy()
    for j in np.flatnonzero(counts == 0):
        movable = counts[labels] > 1
        candidates = np.where(movable, own, -np.inf)
        i = int(np.argmax(candidates))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
        own[i] = -np.inf
    return labels


def _initial_centroids(data: np.ndarray, config: KMeansConfig) -> np.ndarray:
    rng = np.random.default_rng(config.seed)
    m = data.shape[0]
    if config.init == "random":
        return data[rng.choice(m, size=config.k, replace=False)].copy()
    chosen = [int(rng.integers(m))]
    for _ in range(1, config.k):
        cost = cost_matrix(
            data, data[chosen], config.measure, config.fidelity_mode, config.kernel_measurement
        ).min(axis=1)
        cost = np.clip(cost, 0.0, None)
        cost[chosen] = 0.0
        total = cost.sum()
        if total <= 0:
            rest = np.setdiff1d(np.arange(m), chosen)
            chosen.append(int(rng.choice(rest)))
        else:
            chosen.append(int(rng.choice(m, p=cost / total)))
    return data[chosen].copy()


def kmeans(data, config: KMeansConfig, init_centroids=None) -> ClusteringResult:
    """Lloyd iterations until assignments repeat, centroids move < tol, or max_iter.

    Args:
        data: M x N feature matrix.
        config: run parameters; ``config.seed`` drives the initial centroid choice.
        init_centroids: optional explicit k x N starting centroids.
    """
    quantum = config.measure in QUANTUM_MEASURES
    data = as_dataset(data, quantum)
    m = data.shape[0]
    k = config.k
    if k > m:
        raise ConfigurationError(f"k={k} exceeds the number of points M={m}")
    if init_centroids is None:
        centroids = _initial_centroids(data, config)
    else:
        centroids = np.array(init_centroids, dtype=float)
        if centroids.shape != (k, data.shape[1]):
            raise ConfigurationError(
                f"init_centroids must have shape {(k, data.shape[1])}, got {centroids.shape}"
            )

    def costs(c):
        return cost_matrix(data, c, config.measure, config.fidelity_mode, config.kernel_measurement)

    cost = costs(centroids)
    result = ClusteringResult(
        centroids=centroids,
        assignments=np.zeros(m, dtype=np.intp),
        iterations=0,
        wcss_history=[],
        converged=False,
        measure=config.measure,
    )
    previous = None
    for it in range(1, config.max_iter + 1):
        labels = _reseed_empty(_argmin_ties(cost), cost, k)
        new_centroids = update_step(data, labels, k)
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        cost = costs(centroids)
        result.wcss_history.append(_wcss(data, labels, centroids))
        if quantum:
            result.fidelity_history.append(float(np.sum(1.0 - cost[np.arange(m), labels])))
        result.trace.append(labels)
        result.centroid_trace.append(centroids)
        result.iterations = it
        if (previous is not None and np.array_equal(previous, labels)) or shift < config.tol:
            result.converged = True
            break
        previous = labels
    result.centroids = centroids
    result.assignments = labels
    return result


def is_better(candidate: ClusteringResult, incumbent: ClusteringResult | None) -> bool:
    """Restart selection: lower WCSS for Euclidean, higher total fidelity otherwise."""
    if incumbent is None:
        return True
    if candidate.fidelity_history:
        return candidate.total_fidelity > incumbent.total_fidelity
    return candidate.wcss_history[-1] < incumbent.wcss_history[-1]


def kmeans_restarts(data, config: KMeansConfig, restarts: int = 10) -> ClusteringResult:
    """Best of ``restarts`` runs, restart ``r`` seeded with ``config.seed + r``."""
    if restarts < 1:
        raise ConfigurationError(f"restarts must be >= 1, got {restarts!r}")
    best = None
    for r in range(restarts):
        cfg = KMeansConfig(**{**config.__dict__, "seed": config.seed + r})
        res = kmeans(data, cfg)
        if is_better(res, best):
            best = res
    return best


def elbow_curve(
    data, k_min: int, k_max: int, base_config: KMeansConfig, n_restarts: int = 10
) -> list[tuple[int, float]]:
    """Best WCSS per k over seeded restarts.

    For every k above ``k_min`` one extra run starts from the previous k's
    best centroids plus its worst-fitted point. That run can only lower
    WCSS relative to k - 1, so the curve never increases for Euclidean
    K-means.
    """
    data = as_dataset(data, base_config.measure in QUANTUM_MEASURES)
    m = data.shape[0]
    if not (1 <= k_min <= k_max <= m):
        raise UsageError(f"need 1 <= k_min <= k_max <= M, got {k_min}, {k_max}, M={m}")
    curve = []
    prev = None
    for k in range(k_min, k_max + 1):
        cfg = KMeansConfig(**{**base_config.__dict__, "k": k})
        best = None
        for r in range(n_restarts):
            res = kmeans(data, KMeansConfig(**{**cfg.__dict__, "seed": cfg.seed + r}))
            if best is None or res.wcss_history[-1] < best.wcss_history[-1]:
                best = res
        if prev is not None:
            resid = np.einsum("mn,mn->m", data - prev.centroids[prev.assignments],
                              data - prev.centroids[prev.assignments])
            init = np.vstack([prev.centroids, data[int(np.argmax(resid))]])
            warm = kmeans(data, cfg, init_centroids=init)
            if warm.wcss_history[-1] < best.wcss_history[-1]:
                best = warm
        curve.append((k, best.wcss_history[-1]))
        prev = best
    return curve


def suggest_k(curve: list[tuple[int, float]]) -> int:
    """k at the largest discrete second difference of the WCSS curve."""
    if not curve:
        raise UsageError("empty elbow curve")
    if len(curve) < 3:
        return curve[0][0]
    ks = [k for k, _ in curve]
    w = np.array([v for _, v in curve])
    second = w[:-2] - 2.0 * w[1:-1] + w[2:]
    return ks[1 + int(np.argmax(second))]
