from .eig import symmetric_eig
from .kmeans import (
    ClusteringResult,
    KMeansConfig,
    assign_step,
    elbow_curve,
    kmeans,
    kmeans_restarts,
    suggest_k,
    update_step,
    wcss,
)
from .spectral import SpectralConfig, spectral_cluster, spectral_embedding

__all__ = [
    "ClusteringResult",
    "KMeansConfig",
    "SpectralConfig",
    "assign_step",
    "elbow_curve",
    "kmeans",
    "kmeans_restarts",
    "spectral_cluster",
    "spectral_embedding",
    "suggest_k",
    "symmetric_eig",
    "update_step",
    "wcss",
]
