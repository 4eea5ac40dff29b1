"""Pure-numpy fallback for the compiled kernels in ``_ckernels.pyx``.

Same signatures and results. Circuits are simulated for a whole batch of
(x, c) pairs at once with a ``(batch, 2**n)`` real amplitude array; the
Jacobi solver rotates disjoint index pairs in parallel (round-robin
ordering) so each step is a handful of vectorized array operations.
"""

from __future__ import annotations

import math

import numpy as np

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_BATCH = 4096


def _ry(state: np.ndarray, n: int, q: int, theta: np.ndarray) -> np.ndarray:
    view = state.reshape(state.shape[0], 1 << (n - q - 1), 2, 1 << q)
    c = np.cos(0.5 * theta)[:, None, None]
    s = np.sin(0.5 * theta)[:, None, None]
    a0, a1 = view[:, :, 0, :], view[:, :, 1, :]
    out = np.empty_like(view)
    out[:, :, 0, :] = c * a0 - s * a1
    out[:, :, 1, :] = s * a0 + c * a1
    return out.reshape(state.shape)


def _h(state: np.ndarray, n: int, q: int) -> np.ndarray:
    view = state.reshape(state.shape[0], 1 << (n - q - 1), 2, 1 << q)
    a0, a1 = view[:, :, 0, :], view[:, :, 1, :]
    out = np.empty_like(view)
    out[:, :, 0, :] = _INV_SQRT2 * (a0 + a1)
    out[:, :, 1, :] = _INV_SQRT2 * (a0 - a1)
    return out.reshape(state.shape)


def _cswap_perm(n: int, ctl: int, a: int, b: int) -> np.ndarray:
    idx = np.arange(1 << n)
    active = (((idx >> ctl) & 1) == 1) & ((((idx >> a) ^ (idx >> b)) & 1) == 1)
    return np.where(active, idx ^ ((1 << a) | (1 << b)), idx)


def _pairs(X: np.ndarray, C: np.ndarray):
    m, k = X.shape[0], C.shape[0]
    xi = np.repeat(np.arange(m), k)
    ci = np.tile(np.arange(k), m)
    for start in range(0, m * k, _BATCH):
        sl = slice(start, start + _BATCH)
        yield sl, X[xi[sl]], C[ci[sl]]


def swap_test_p0(X: np.ndarray, C: np.ndarray) -> np.ndarray:
    n = X.shape[1]
    nq = 2 * n + 1
    perms = [_cswap_perm(nq, 0, 1 + q, 1 + n + q) for q in range(n)]
    out = np.empty(X.shape[0] * C.shape[0])
    for sl, xs, cs in _pairs(X, C):
        state = np.zeros((xs.shape[0], 1 << nq))
        state[:, 0] = 1.0
        state = _h(state, nq, 0)
        for q in range(n):
            state = _ry(state, nq, 1 + q, 2.0 * xs[:, q])
            state = _ry(state, nq, 1 + n + q, 2.0 * cs[:, q])
        for perm in perms:
            state = state[:, perm]
        state = _h(state, nq, 0)
        out[sl] = np.sum(state[:, 0::2] ** 2, axis=1)
    return out.reshape(X.shape[0], C.shape[0])


def kernel_p0(X: np.ndarray, C: np.ndarray, first_qubit: bool = False) -> np.ndarray:
    n = X.shape[1]
    out = np.empty(X.shape[0] * C.shape[0])
    for sl, xs, cs in _pairs(X, C):
        state = np.zeros((xs.shape[0], 1 << n))
        state[:, 0] = 1.0
        for q in range(n):
            state = _ry(state, n, q, 2.0 * xs[:, q])
            state = _ry(state, n, q, -2.0 * cs[:, q])
        if first_qubit:
            out[sl] = np.sum(state[:, 0::2] ** 2, axis=1)
        else:
            out[sl] = state[:, 0] ** 2
    return out.reshape(X.shape[0], C.shape[0])


def _round_robin(n: int):
    """Yield (p, q) index arrays; each round touches every index at most once."""
    m = n + (n % 2)
    players = list(range(m))
    for _ in range(m - 1):
        p = np.array([players[i] for i in range(m // 2)])
        q = np.array([players[m - 1 - i] for i in range(m // 2)])
        keep = (p < n) & (q < n)
        p, q = p[keep], q[keep]
        yield np.minimum(p, q), np.maximum(p, q)
        players = [players[0], players[-1]] + players[1:-1]


def jacobi_eigh(A: np.ndarray, tol: float = 1e-15, max_sweeps: int = 100):
    a = np.array(A, dtype=float, copy=True)
    n = a.shape[0]
    v = np.eye(n)
    total = float(np.sum(a * a))
    schedule = list(_round_robin(n))
    upper = np.triu_indices(n, 1)
    sweep = 0
    while sweep < max_sweeps:
        # summed directly; total minus diagonal cancels near convergence
        off = float(np.sum(a[upper] ** 2))
        if 2.0 * off <= tol * tol * total:
            break
        sweep += 1
        thresh = 0.2 * math.sqrt(off) / (n * n) if sweep <= 3 else 0.0
        for p, q in schedule:
            apq = a[p, q]
            if sweep > 4:
                g = 100.0 * np.abs(apq)
                app, aqq = np.abs(a[p, p]), np.abs(a[q, q])
                drop = (app + g == app) & (aqq + g == aqq) & (apq != 0.0)
                if drop.any():
                    a[p[drop], q[drop]] = 0.0
                    a[q[drop], p[drop]] = 0.0
                    apq = np.where(drop, 0.0, apq)
            nz = (apq != 0.0) & (np.abs(apq) > thresh)
            if not nz.any():
                continue
            p, q, apq = p[nz], q[nz], apq[nz]
            theta = (a[q, q] - a[p, p]) / (2.0 * apq)
            t = np.sign(theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            t[theta == 0.0] = 1.0
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            cp, sp = a[:, p], a[:, q]
            a[:, p], a[:, q] = c * cp - s * sp, s * cp + c * sp
            rp, rq = a[p, :], a[q, :]
            a[p, :], a[q, :] = c[:, None] * rp - s[:, None] * rq, s[:, None] * rp + c[:, None] * rq
            a[p, q] = 0.0
            a[q, p] = 0.0
            vp, vq = v[:, p], v[:, q]
            v[:, p], v[:, q] = c * vp - s * vq, s * vp + c * vq
    return np.diag(a).copy(), v, sweep
