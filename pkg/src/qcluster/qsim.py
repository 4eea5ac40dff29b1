"""Minimal dense statevector simulator.

Only the gates the two distance circuits need are provided: Hadamard,
Y-rotation and controlled-SWAP, plus the two measurement probabilities
(single qubit in ``|0>`` and register in ``|0...0>``) and shot sampling.

Qubit 0 is the least-significant bit of the basis-state index, so for
two qubits the amplitude order is ``|q1 q0> = 00, 01, 10, 11``.

Gate functions are pure: they return a new :class:`StateVector` and never
touch their input, so a state can be shared read-only between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UsageError

MAX_QUBITS = 12
NORM_TOL = 1e-10
EQ_TOL = 1e-12

_INV_SQRT2 = 1.0 / math.sqrt(2.0)
_HADAMARD = np.array([[1.0, 1.0], [1.0, -1.0]], dtype=complex) * _INV_SQRT2


@dataclass(frozen=True)
class StateVector:
    """Normalized amplitudes over ``n_qubits`` qubits."""

    n_qubits: int
    amps: np.ndarray

    def __post_init__(self):
        if self.amps.shape != (1 << self.n_qubits,):
            raise UsageError(
                f"expected {1 << self.n_qubits} amplitudes for {self.n_qubits} qubits, "
                f"got shape {self.amps.shape}"
            )

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    @classmethod
    def from_amplitudes(cls, amps) -> "StateVector":
        """Wrap an existing amplitude array; its length must be a power of two."""
        amps = np.asarray(amps, dtype=complex).ravel().copy()
        n = int(amps.size).bit_length() - 1
        if amps.size < 2 or (1 << n) != amps.size:
            raise UsageError(f"amplitude count {amps.size} is not a power of two >= 2")
        if not 1 <= n <= MAX_QUBITS:
            raise ConfigurationError(f"qubit count {n} outside [1, {MAX_QUBITS}]")
        norm = math.sqrt(float(np.vdot(amps, amps).real))
        if abs(norm - 1.0) > NORM_TOL:
            raise UsageError(f"amplitudes are not normalized (norm {norm!r})")
        return cls(n, amps)


def _check_qubit(state: StateVector, q: int) -> int:
    if not isinstance(q, (int, np.integer)) or not 0 <= q < state.n_qubits:
        raise UsageError(f"qubit index {q!r} out of range for {state.n_qubits} qubits")
    return int(q)


def _apply_1q(state: StateVector, matrix: np.ndarray, q: int) -> StateVector:
    n = state.n_qubits
    # axis 1 of the view is qubit q (LSB ordering)
    view = state.amps.reshape(1 << (n - q - 1), 2, 1 << q)
    out = np.einsum("ij,ajb->aib", matrix, view).reshape(-1)
    return StateVector(n, out)


def init_state(n_qubits: int) -> StateVector:
    """Return the ground state ``|0...0>`` on ``n_qubits`` qubits."""
    if not isinstance(n_qubits, (int, np.integer)) or not 1 <= n_qubits <= MAX_QUBITS:
        raise ConfigurationError(f"qubit count {n_qubits!r} outside [1, {MAX_QUBITS}]")
    amps = np.zeros(1 << int(n_qubits), dtype=complex)
    amps[0] = 1.0
    return StateVector(int(n_qubits), amps)


def apply_hadamard(state: StateVector, q: int) -> StateVector:
    return _apply_1q(state, _HADAMARD, _check_qubit(state, q))


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2.0), math.sin(theta / 2.0)
    return np.array([[c, -s], [s, c]], dtype=complex)


def apply_ry(state: StateVector, q: int, theta: float) -> StateVector:
    """Rotate qubit ``q`` about Y by ``theta``; ``RY(2x)|0> = cos x|0> + sin x|1>``."""
    q = _check_qubit(state, q)
    if not math.isfinite(theta):
        raise UsageError(f"rotation angle must be finite, got {theta!r}")
    return _apply_1q(state, ry_matrix(float(theta)), q)


def apply_cswap(state: StateVector, control: int, a: int, b: int) -> StateVector:
    """Exchange qubits ``a`` and ``b`` on the subspace where ``control`` is 1."""
    control, a, b = (_check_qubit(state, i) for i in (control, a, b))
    if len({control, a, b}) != 3:
        raise UsageError(f"CSWAP needs three distinct qubits, got {(control, a, b)}")
    idx = np.arange(1 << state.n_qubits)
    active = (((idx >> control) & 1) == 1) & ((((idx >> a) ^ (idx >> b)) & 1) == 1)
    partner = idx ^ ((1 << a) | (1 << b))
    out = state.amps.copy()
    out[active] = state.amps[partner[active]]
    return StateVector(state.n_qubits, out)


def prob_zero(state: StateVector, q: int) -> float:
    """Probability that measuring qubit ``q`` yields 0."""
    q = _check_qubit(state, q)
    view = state.amps.reshape(1 << (state.n_qubits - q - 1), 2, 1 << q)
    return float(np.sum(np.abs(view[:, 0, :]) ** 2))


def prob_one(state: StateVector, q: int) -> float:
    q = _check_qubit(state, q)
    view = state.amps.reshape(1 << (state.n_qubits - q - 1), 2, 1 << q)
    return float(np.sum(np.abs(view[:, 1, :]) ** 2))


def prob_all_zero(state: StateVector) -> float:
    """Probability of the all-zeros outcome, ``|amps[0]|**2``."""
    return float(abs(state.amps[0]) ** 2)


def sample_binomial(p: float, shots: int, seed: int) -> int:
    """Draw the number of successes in ``shots`` trials with probability ``p``."""
    if not isinstance(shots, (int, np.integer)) or shots < 1:
        raise UsageError(f"shots must be a positive integer, got {shots!r}")
    p = min(max(float(p), 0.0), 1.0)
    rng = np.random.default_rng(seed)
    return int(rng.binomial(int(shots), p))


def sample_zero_counts(state: StateVector, q: int, shots: int, seed: int) -> int:
    """Simulate ``shots`` measurements of qubit ``q`` and count the zeros."""
    return sample_binomial(prob_zero(state, q), shots, seed)


def sample_all_zero_counts(state: StateVector, shots: int, seed: int) -> int:
    return sample_binomial(prob_all_zero(state), shots, seed)


def inner_product(a: StateVector, b: StateVector) -> complex:
    """Return ``<a|b>``, conjugate-linear in the first argument."""
    if a.n_qubits != b.n_qubits:
        raise UsageError(f"qubit count mismatch: {a.n_qubits} vs {b.n_qubits}")
    return complex(np.vdot(a.amps, b.amps))
