"""Symmetric eigendecomposition by Jacobi rotations."""

from __future__ import annotations

import warnings

import numpy as np

from .. import kernels
from ..errors import UsageError

SYMMETRY_TOL = 1e-9


def symmetric_eig(matrix, tol: float = 1e-15, max_sweeps: int = 100):
    """Eigenvalues (ascending) and orthonormal eigenvectors (columns).

    Each eigenvector's sign is fixed so its largest-magnitude entry is
    positive, which makes the output independent of rotation order up to
    degenerate eigenspaces.
    """
    a = np.asarray(matrix, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise UsageError(f"expected a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise UsageError("matrix has non-finite entries")
    scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
    if a.size and float(np.max(np.abs(a - a.T))) > SYMMETRY_TOL * scale:
        raise UsageError("matrix is not symmetric")
    a = np.ascontiguousarray(0.5 * (a + a.T))
    if a.shape[0] == 0:
        return np.empty(0), np.empty((0, 0))
    w, v, sweeps = kernels.jacobi_eigh(a, tol, max_sweeps)
    if sweeps >= max_sweeps:
        warnings.warn(f"Jacobi eigensolver hit max_sweeps={max_sweeps}", RuntimeWarning)
    order = np.argsort(w, kind="stable")
    w, v = w[order], v[:, order]
    pivots = np.argmax(np.abs(v), axis=0)
    signs = np.sign(v[pivots, np.arange(v.shape[1])])
    signs[signs == 0] = 1.0
    return w, v * signs
