"""Quantum feature encodings and circuit-based fidelity estimators.

Angle encoding maps a feature ``x_i`` in ``[0, pi]`` to the qubit state
``cos(x_i)|0> + sin(x_i)|1>``, prepared as ``RY(2 x_i)|0>``; an N-feature
vector becomes an N-qubit product state.

Two circuits estimate the squared overlap ``F = |<psi(x)|psi(c)>|**2``:

* swap test on ``2N + 1`` qubits. Qubit 0 is the ancilla, qubits
  ``1..N`` hold ``x`` and ``N+1..2N`` hold ``c``. The ancilla reads 0 with
  probability ``(1 + F) / 2``.
* kernel circuit on ``N`` qubits, ``U(c)^dagger U(x)|0>``, whose
  all-zeros probability is ``F``.

Both run on :mod:`qcluster.qsim`. :func:`analytic_fidelity` is the
closed-form product ``prod cos^2(x_i - c_i)`` and serves as an
independent check of the circuits.
"""

from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from . import kernels, qsim
from .errors import EncodingError, UsageError

KernelMeasurement = Literal["all_zeros", "first_qubit"]
ANGLE_SLACK = 1e-12


@dataclass(frozen=True)
class FidelityMode:
    """Exact probabilities (``shots=None``) or a seeded shot-sampled estimate."""

    shots: int | None = None
    seed: int = 0

    def __post_init__(self):
        if self.shots is not None and (
            not isinstance(self.shots, (int, np.integer)) or self.shots < 1
        ):
            raise UsageError(f"shots must be >= 1 when sampling, got {self.shots!r}")

    @property
    def exact(self) -> bool:
        return self.shots is None

    @classmethod
    def sampled(cls, shots: int, seed: int = 0) -> "FidelityMode":
        return cls(shots=shots, seed=seed)


EXACT = FidelityMode()


def check_angles(x, name: str = "x") -> np.ndarray:
    """Validate an angle vector and return it as a float array."""
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise EncodingError(f"{name} must be a non-empty 1-D vector, got shape {arr.shape}")
    bad = np.flatnonzero(~np.isfinite(arr) | (arr < -ANGLE_SLACK) | (arr > math.pi + ANGLE_SLACK))
    if bad.size:
        i = int(bad[0])
        raise EncodingError(f"{name}[{i}] = {arr[i]!r} is outside [0, pi]")
    return arr


def _check_pair(x, c) -> tuple[np.ndarray, np.ndarray]:
    x = check_angles(x, "x")
    c = check_angles(c, "c")
    if x.shape != c.shape:
        raise UsageError(f"dimension mismatch: {x.size} vs {c.size}")
    return x, c


def angle_encode(x) -> qsim.StateVector:
    x = check_angles(x)
    state = qsim.init_state(x.size)
    for i, xi in enumerate(x):
        state = qsim.apply_ry(state, i, 2.0 * xi)
    return state


def amplitude_encode(x) -> qsim.StateVector:
    """L2-normalize ``x``, zero-pad to a power of two and use it as amplitudes."""
    arr = np.asarray(x, dtype=float).ravel()
    if arr.size == 0 or not np.all(np.isfinite(arr)):
        raise EncodingError("amplitude encoding needs a finite, non-empty vector")
    norm = float(np.linalg.norm(arr))
    if norm == 0.0:
        raise EncodingError("cannot amplitude-encode the all-zero vector")
    n_qubits = max(1, math.ceil(math.log2(arr.size)))
    amps = np.zeros(1 << n_qubits, dtype=complex)
    amps[: arr.size] = arr / norm
    return qsim.StateVector.from_amplitudes(amps)


def swap_test_circuit(x, c) -> qsim.StateVector:
    """Run the full swap-test circuit and return the final (pre-measurement) state."""
    x, c = _check_pair(x, c)
    n = x.size
    state = qsim.init_state(2 * n + 1)
    state = qsim.apply_hadamard(state, 0)
    for i in range(n):
        state = qsim.apply_ry(state, 1 + i, 2.0 * x[i])
        state = qsim.apply_ry(state, 1 + n + i, 2.0 * c[i])
    for i in range(n):
        state = qsim.apply_cswap(state, 0, 1 + i, 1 + n + i)
    return qsim.apply_hadamard(state, 0)


def kernel_circuit(x, c) -> qsim.StateVector:
    """Apply ``U(x)`` then ``U(c)^dagger`` to ``|0...0>`` on N qubits."""
    x, c = _check_pair(x, c)
    state = qsim.init_state(x.size)
    for i in range(x.size):
        state = qsim.apply_ry(state, i, 2.0 * x[i])
        state = qsim.apply_ry(state, i, -2.0 * c[i])
    return state


def derive_seed(seed: int, x, c) -> int:
    """Per-pair seed so sampled estimates do not depend on evaluation order."""
    h = hashlib.blake2b(digest_size=8)
    h.update(int(seed).to_bytes(16, "little", signed=True))
    h.update(np.ascontiguousarray(x, dtype=np.float64).tobytes())
    h.update(np.ascontiguousarray(c, dtype=np.float64).tobytes())
    return int.from_bytes(h.digest(), "little")


def _clamp(f: float) -> float:
    return min(max(f, 0.0), 1.0)


def swap_test_fidelity(x, c, mode: FidelityMode = EXACT) -> float:
    state = swap_test_circuit(x, c)
    if mode.exact:
        p0 = qsim.prob_zero(state, 0)
    else:
        zeros = qsim.sample_zero_counts(state, 0, mode.shots, derive_seed(mode.seed, x, c))
        p0 = zeros / mode.shots
    return _clamp(2.0 * p0 - 1.0)


def kernel_fidelity(
    x, c, mode: FidelityMode = EXACT, measurement: KernelMeasurement = "all_zeros"
) -> float:
    """Kernel value ``|<0|U(c)^dagger U(x)|0>|^2``.

    ``measurement="first_qubit"`` instead reports the probability that
    only qubit 0 returns to ``|0>``, which equals ``cos^2(x_0 - c_0)`` for
    product encodings.
    """
    state = kernel_circuit(x, c)
    if measurement == "all_zeros":
        p = qsim.prob_all_zero(state)
    elif measurement == "first_qubit":
        p = qsim.prob_zero(state, 0)
    else:
        raise UsageError(f"unknown kernel measurement {measurement!r}")
    if not mode.exact:
        p = qsim.sample_binomial(p, mode.shots, derive_seed(mode.seed, x, c)) / mode.shots
    return _clamp(p)


def analytic_fidelity(x, c) -> float:
    x, c = _check_pair(x, c)
    return float(np.prod(np.cos(x - c) ** 2))


def _sample_matrix(probs: np.ndarray, X: np.ndarray, C: np.ndarray, mode: FidelityMode) -> np.ndarray:
    out = np.empty_like(probs)
    for i in range(X.shape[0]):
        for j in range(C.shape[0]):
            seed = derive_seed(mode.seed, X[i], C[j])
            out[i, j] = qsim.sample_binomial(probs[i, j], mode.shots, seed) / mode.shots
    return out


def fidelity_matrix(
    X,
    C,
    circuit: Literal["swap_test", "quantum_kernel"],
    mode: FidelityMode = EXACT,
    measurement: KernelMeasurement = "all_zeros",
) -> np.ndarray:
    """Fidelities between every row of ``X`` and every row of ``C``.

    The circuits are simulated in batch by :mod:`qcluster.kernels`;
    entry ``[i, j]`` equals the scalar ``swap_test_fidelity(X[i], C[j])``
    (or ``kernel_fidelity``) for the same mode, sampled values included.
    """
    X = np.ascontiguousarray(X, dtype=float)
    C = np.ascontiguousarray(C, dtype=float)
    if X.ndim != 2 or C.ndim != 2 or X.shape[1] != C.shape[1]:
        raise UsageError(f"incompatible shapes {X.shape} and {C.shape}")
    for name, arr in (("X", X), ("C", C)):
        if np.any(~np.isfinite(arr)) or arr.min() < -ANGLE_SLACK or arr.max() > math.pi + ANGLE_SLACK:
            raise EncodingError(f"{name} has entries outside [0, pi]")
    if circuit == "swap_test":
        if 2 * X.shape[1] + 1 > qsim.MAX_QUBITS:
            raise UsageError(f"swap test on {X.shape[1]} features exceeds {qsim.MAX_QUBITS} qubits")
        probs = kernels.swap_test_p0(X, C)
        if not mode.exact:
            probs = _sample_matrix(probs, X, C, mode)
        return np.clip(2.0 * probs - 1.0, 0.0, 1.0)
    if circuit == "quantum_kernel":
        if measurement not in ("all_zeros", "first_qubit"):
            raise UsageError(f"unknown kernel measurement {measurement!r}")
        probs = kernels.kernel_p0(X, C, measurement == "first_qubit")
        if not mode.exact:
            probs = _sample_matrix(probs, X, C, mode)
        return np.clip(probs, 0.0, 1.0)
    raise UsageError(f"unknown circuit {circuit!r}")
