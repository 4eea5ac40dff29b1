"""End-to-end runs: KEV CSV -> features -> four clusterings -> metrics and profiles."""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from . import __version__
from .cluster import ClusteringResult, KMeansConfig, SpectralConfig, kmeans_restarts, spectral_cluster
from .cluster.kmeans import update_step
from .encode import FidelityMode
from .errors import DataError, MetricUndefinedError, UsageError
from .ingest import (
    ANGLE_RANGE,
    UNIT_RANGE,
    ClusterProfile,
    LabelEncoding,
    VulnRecord,
    cluster_profile,
    filter_year,
    label_encode,
    min_max_normalize,
    parse_kev_csv,
)
from .metrics import MetricReport, metric_report

log = logging.getLogger(__name__)

# row order of the comparison table
ALGORITHMS = ("kmeans", "spectral", "qcswap_kmeans", "qkernel_kmeans")
LABELS = {
    "kmeans": "K-means",
    "spectral": "Spectral Clustering",
    "qcswap_kmeans": "QCSWAPK-means",
    "qkernel_kmeans": "QkernelK-means",
}
QUANTUM = {"qcswap_kmeans": "swap_test", "qkernel_kmeans": "quantum_kernel"}
# "full": feature x -> RY(2x)|0>, fidelity cos^2(dx).
# "half": feature x -> RY(x)|0>, fidelity cos^2(dx/2), monotone over [0, pi].
ANGLE_ENCODINGS = {"full": 1.0, "half": 0.5}


@dataclass(frozen=True)
class RunSpec:
    input_path: str
    algorithm: str = "all"
    k: int = 4
    seed: int = 0
    restarts: int = 10
    shots: int | None = None
    output_dir: str = "out"
    year_filter: int | None = 2022
    kernel_measurement: str = "all_zeros"
    angle_encoding: str = "full"

    def __post_init__(self):
        if self.algorithm != "all" and self.algorithm not in ALGORITHMS:
            raise UsageError(f"unknown algorithm {self.algorithm!r}")
        if self.k < 1:
            raise UsageError(f"k must be >= 1, got {self.k}")
        if self.restarts < 1:
            raise UsageError(f"restarts must be >= 1, got {self.restarts}")
        if self.shots is not None and self.shots < 1:
            raise UsageError(f"shots must be >= 1, got {self.shots}")
        if self.kernel_measurement not in ("all_zeros", "first_qubit"):
            raise UsageError(f"unknown kernel measurement {self.kernel_measurement!r}")
        if self.angle_encoding not in ANGLE_ENCODINGS:
            raise UsageError(f"unknown angle encoding {self.angle_encoding!r}")

    @property
    def algorithms(self) -> tuple[str, ...]:
        return ALGORITHMS if self.algorithm == "all" else (self.algorithm,)


@dataclass
class Dataset:
    records: list[VulnRecord]
    raw: np.ndarray
    encodings: dict[str, LabelEncoding]
    n_rejects: int = 0

    @property
    def m(self) -> int:
        return len(self.records)


@dataclass
class AlgorithmRun:
    name: str
    features: np.ndarray
    value_range: tuple[float, float]
    result: ClusteringResult
    plot_centroids: np.ndarray
    metrics: MetricReport | None
    metric_error: str | None
    profiles: list[ClusterProfile]
    seconds: float = 0.0


def load_dataset(path, year: int | None = 2022) -> Dataset:
    catalog = parse_kev_csv(path)
    records = catalog.records if year is None else filter_year(catalog.records, year)
    if not records:
        raise DataError(f"no usable records in {path} for year {year}")
    raw, encodings = label_encode(records)
    return Dataset(records, raw, encodings, len(catalog.rejects))


def _metrics(features, labels):
    try:
        return metric_report(features, labels), None
    except MetricUndefinedError as exc:
        return None, str(exc)


def run_algorithm(
    name: str,
    ds: Dataset,
    k: int,
    seed: int = 0,
    restarts: int = 10,
    shots: int | None = None,
    kernel_measurement: str = "all_zeros",
    angle_encoding: str = "full",
) -> AlgorithmRun:
    """Run one algorithm with best-of-restarts selection.

    Classical algorithms see features scaled to [0, 1], the quantum ones
    features scaled to [0, pi]. Metrics use the same features the
    algorithm saw.
    """
    start = time.perf_counter()
    if name in QUANTUM:
        rng = ANGLE_RANGE
        features = min_max_normalize(ds.raw, rng)
        mode = FidelityMode(shots=shots, seed=seed)
        cfg = KMeansConfig(k=k, seed=seed, measure=QUANTUM[name], fidelity_mode=mode,
                           kernel_measurement=kernel_measurement)
        scale = ANGLE_ENCODINGS[angle_encoding]
        # the mean update commutes with scaling, so clustering x * scale and
        # rescaling the centroids equals clustering with RY(2 * scale * x)
        result = kmeans_restarts(features * scale, cfg, restarts)
        if scale != 1.0:
            result.centroids = result.centroids / scale
            result.centroid_trace = [c / scale for c in result.centroid_trace]
        plot_centroids = result.centroids
    elif name == "kmeans":
        rng = UNIT_RANGE
        features = min_max_normalize(ds.raw, rng)
        result = kmeans_restarts(features, KMeansConfig(k=k, seed=seed), restarts)
        plot_centroids = result.centroids
    elif name == "spectral":
        rng = UNIT_RANGE
        features = min_max_normalize(ds.raw, rng)
        result = spectral_cluster(features, SpectralConfig(k=k, seed=seed, n_init=restarts))
        plot_centroids = update_step(features, result.assignments, k)
    else:
        raise UsageError(f"unknown algorithm {name!r}")
    metrics, err = _metrics(features, result.assignments)
    return AlgorithmRun(
        name=name,
        features=features,
        value_range=(rng.lo, rng.hi),
        result=result,
        plot_centroids=plot_centroids,
        metrics=metrics,
        metric_error=err,
        profiles=cluster_profile(ds.records, result.assignments, k),
        seconds=time.perf_counter() - start,
    )


def run_all(spec: RunSpec, ds: Dataset | None = None) -> tuple[Dataset, list[AlgorithmRun]]:
    if ds is None:
        ds = load_dataset(spec.input_path, spec.year_filter)
    if spec.k > ds.m:
        raise UsageError(f"k={spec.k} exceeds the {ds.m} records available")
    runs = [
        run_algorithm(a, ds, spec.k, spec.seed, spec.restarts, spec.shots,
                      spec.kernel_measurement, spec.angle_encoding)
        for a in spec.algorithms
    ]
    return ds, runs


def _as_list(arr) -> list:
    return np.asarray(arr, dtype=float).tolist()


def build_report(spec: RunSpec, ds: Dataset, runs: list[AlgorithmRun], timestamp: str) -> dict:
    """JSON-ready report; everything outside ``timing`` is deterministic."""
    algos = []
    for run in runs:
        res = run.result
        algos.append({
            "name": run.name,
            "label": LABELS[run.name],
            "feature_range": list(run.value_range),
            "selection": "max_total_fidelity" if res.fidelity_history else "min_wcss",
            "iterations": res.iterations,
            "converged": res.converged,
            "wcss": float(np.sum((run.features - run.plot_centroids[res.assignments]) ** 2)),
            "total_fidelity": res.total_fidelity,
            "metrics": None if run.metrics is None else {
                "silhouette": run.metrics.silhouette,
                "davies_bouldin": run.metrics.davies_bouldin,
                "calinski_harabasz": run.metrics.calinski_harabasz,
            },
            "metric_error": run.metric_error,
            "cluster_sizes": np.bincount(res.assignments, minlength=spec.k).tolist(),
            "centroids": _as_list(run.plot_centroids),
            "embedding_centroids": _as_list(res.centroids) if run.name == "spectral" else None,
            "assignments": res.assignments.tolist(),
            "profiles": [
                {
                    "cluster_id": p.cluster_id,
                    "size": p.size,
                    "top_vendors": [list(v) for v in p.top_vendors[:10]],
                    "top_products": [list(v) for v in p.top_products[:10]],
                    "severity_histogram": dict(p.severity_histogram),
                }
                for p in run.profiles
            ],
        })
    return {
        "tool": {"name": "qcluster", "version": __version__},
        "config": {
            "input": str(spec.input_path),
            "algorithm": spec.algorithm,
            "k": spec.k,
            "seed": spec.seed,
            "restarts": spec.restarts,
            "shots": spec.shots,
            "fidelity_mode": "exact" if spec.shots is None else "sampled",
            "year": spec.year_filter,
            "kernel_measurement": spec.kernel_measurement,
            "angle_encoding": spec.angle_encoding,
        },
        "dataset": {
            "records": ds.m,
            "rejects": ds.n_rejects,
            "features": list(ds.encodings),
            "categories": {c: len(e.categories) for c, e in ds.encodings.items()},
        },
        "algorithms": algos,
        "timing": {
            "timestamp": timestamp,
            "seconds": {run.name: round(run.seconds, 6) for run in runs},
        },
    }


def check_report(report: dict, runs: list[AlgorithmRun], tol: float = 1e-9) -> None:
    """Recompute metrics from the stored assignments; raise AssertionError on mismatch."""
    for entry, run in zip(report["algorithms"], runs):
        if entry["metrics"] is None:
            continue
        again = metric_report(run.features, np.asarray(entry["assignments"]))
        for key in ("silhouette", "davies_bouldin", "calinski_harabasz"):
            if abs(getattr(again, key) - entry["metrics"][key]) > tol * max(1.0, abs(entry["metrics"][key])):
                raise AssertionError(f"{entry['name']}: stored {key} does not match recomputation")


METRIC_COLUMNS = (("silhouette", max), ("davies_bouldin", min), ("calinski_harabasz", max))


def comparison_rows(runs: list[AlgorithmRun]) -> list[dict]:
    """One row per algorithm; ``best_<metric>`` flags every value tied for best."""
    rows = [{"algorithm": LABELS[r.name], **({} if r.metrics is None else {
        "silhouette": r.metrics.silhouette,
        "davies_bouldin": r.metrics.davies_bouldin,
        "calinski_harabasz": r.metrics.calinski_harabasz,
    })} for r in runs]
    for key, pick in METRIC_COLUMNS:
        values = [row[key] for row in rows if key in row]
        best = pick(values) if values else None
        for row in rows:
            row[f"best_{key}"] = key in row and abs(row[key] - best) <= 1e-12 * max(1.0, abs(best))
    return rows


def comparison_csv(rows: list[dict]) -> str:
    header = ["algorithm", "silhouette", "davies_bouldin", "calinski_harabasz",
              "best_silhouette", "best_davies_bouldin", "best_calinski_harabasz"]
    lines = [",".join(header)]
    for row in rows:
        cells = [row["algorithm"]]
        for key, _ in METRIC_COLUMNS:
            cells.append(repr(float(row[key])) if key in row else "")
        cells += ["1" if row[f"best_{key}"] else "0" for key, _ in METRIC_COLUMNS]
        lines.append(",".join(cells))
    return "\n".join(lines) + "\n"


def comparison_text(rows: list[dict]) -> str:
    head = f"{'Algorithm':<22}{'Silhouette ^':>15}{'Davies-Bouldin v':>19}{'Calinski-Harabasz ^':>22}"
    lines = [head, "-" * len(head)]
    for row in rows:
        cells = []
        for (key, _), width, fmt in zip(METRIC_COLUMNS, (15, 19, 22), ("{:.3f}", "{:.3f}", "{:.3f}")):
            if key in row:
                cell = fmt.format(row[key]) + ("*" if row[f"best_{key}"] else " ")
            else:
                cell = "n/a "
            cells.append(f"{cell:>{width}}")
        lines.append(f"{row['algorithm']:<22}" + "".join(cells))
    lines.append("(* best in column)")
    return "\n".join(lines) + "\n"
