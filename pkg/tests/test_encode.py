import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import product_overlap_sq
from qcluster import encode, qsim
from qcluster.encode import EXACT, FidelityMode
from qcluster.errors import EncodingError, UsageError

angles = st.floats(0, math.pi, allow_nan=False)


def test_angle_encode_examples():
    np.testing.assert_allclose(encode.angle_encode([0.0]).amps, [1, 0], atol=1e-15)
    np.testing.assert_allclose(encode.angle_encode([math.pi / 2]).amps, [0, 1], atol=1e-15)
    s = encode.angle_encode([math.pi / 4, math.pi / 4])
    np.testing.assert_allclose(s.amps, [0.5] * 4, atol=1e-15)
    # tensor product of the two single-qubit states, checked through the overlap
    single = np.array([math.sqrt(0.5), math.sqrt(0.5)])
    ref = qsim.StateVector(2, np.kron(single, single).astype(complex))
    assert abs(qsim.inner_product(ref, s)) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_angle_encode_rejects_out_of_range_and_names_index():
    with pytest.raises(EncodingError, match=r"x\[1\]"):
        encode.angle_encode([0.1, 3.5])
    with pytest.raises(EncodingError):
        encode.angle_encode([-0.1])


def test_amplitude_encode():
    np.testing.assert_allclose(encode.amplitude_encode([1, 0]).amps, [1, 0])
    np.testing.assert_allclose(encode.amplitude_encode([3, 4]).amps, [0.6, 0.8])
    s = encode.amplitude_encode([1, 1, 1])
    assert s.n_qubits == 2
    np.testing.assert_allclose(s.amps, [3 ** -0.5] * 3 + [0])
    with pytest.raises(EncodingError):
        encode.amplitude_encode([0, 0])


def test_swap_test_examples():
    x = [0.4, 2.2]
    assert encode.swap_test_fidelity(x, x) == pytest.approx(1.0, abs=1e-12)
    state = encode.swap_test_circuit([0.0], [math.pi / 2])
    assert qsim.prob_zero(state, 0) == pytest.approx(0.5, abs=1e-12)
    assert encode.swap_test_fidelity([0.0], [math.pi / 2]) == pytest.approx(0.0, abs=1e-12)
    f = encode.swap_test_fidelity([0.3, 0.7], [0.1, 0.9])
    assert f == pytest.approx(encode.analytic_fidelity([0.3, 0.7], [0.1, 0.9]), abs=1e-12)
    assert f == pytest.approx(0.9226188356698383, abs=1e-12)


def test_full_swap_test_on_identical_states_gives_unit_probability():
    state = encode.swap_test_circuit([1.0, 2.0], [1.0, 2.0])
    assert state.n_qubits == 5
    assert qsim.prob_zero(state, 0) == pytest.approx(1.0, abs=1e-12)


def test_kernel_examples():
    assert encode.kernel_fidelity([1.2, 0.3], [1.2, 0.3]) == pytest.approx(1.0, abs=1e-12)
    assert encode.kernel_fidelity([0.0], [math.pi / 2]) == pytest.approx(0.0, abs=1e-12)
    assert encode.kernel_circuit([0.1, 0.2], [0.3, 0.4]).n_qubits == 2


def test_first_qubit_kernel_readout_only_sees_first_feature():
    x, c = [0.3, 0.7], [0.1, 2.9]
    f = encode.kernel_fidelity(x, c, measurement="first_qubit")
    assert f == pytest.approx(math.cos(0.2) ** 2, abs=1e-12)
    assert f > encode.kernel_fidelity(x, c)
    with pytest.raises(UsageError):
        encode.kernel_fidelity(x, c, measurement="bogus")


def test_analytic_fidelity():
    assert encode.analytic_fidelity([0.5], [0.5]) == 1.0
    assert encode.analytic_fidelity([0.0], [math.pi / 2]) == pytest.approx(0.0, abs=1e-15)
    assert encode.analytic_fidelity([0.3, 0.7], [0.1, 0.9]) == pytest.approx(math.cos(0.2) ** 4)
    with pytest.raises(UsageError):
        encode.analytic_fidelity([0.1], [0.1, 0.2])


@settings(max_examples=200, deadline=None)
@given(x=st.lists(angles, min_size=2, max_size=2), c=st.lists(angles, min_size=2, max_size=2))
def test_circuits_agree_with_closed_form_and_are_symmetric(x, c):
    ref = product_overlap_sq(x, c)
    swap = encode.swap_test_fidelity(x, c)
    kern = encode.kernel_fidelity(x, c)
    assert swap == pytest.approx(ref, abs=1e-12)
    assert kern == pytest.approx(ref, abs=1e-12)
    assert encode.analytic_fidelity(x, c) == pytest.approx(ref, abs=1e-12)
    assert swap == pytest.approx(encode.swap_test_fidelity(c, x), abs=1e-12)
    assert kern == pytest.approx(encode.kernel_fidelity(c, x), abs=1e-12)
    assert qsim.prob_zero(encode.swap_test_circuit(x, c), 0) >= 0.5 - 1e-12
    assert 0.0 <= swap <= 1.0 and 0.0 <= kern <= 1.0


def test_dimension_mismatch():
    with pytest.raises(UsageError):
        encode.swap_test_fidelity([0.1], [0.1, 0.2])
    with pytest.raises(UsageError):
        encode.kernel_fidelity([0.1, 0.2], [0.1])


def test_sampled_modes_are_seeded_and_bounded():
    x, c = [0.3, 1.0], [0.5, 2.0]
    mode = FidelityMode.sampled(500, seed=11)
    a = encode.swap_test_fidelity(x, c, mode)
    assert a == encode.swap_test_fidelity(x, c, mode)
    assert 0.0 <= a <= 1.0
    assert encode.kernel_fidelity(x, c, mode) == encode.kernel_fidelity(x, c, mode)
    with pytest.raises(UsageError):
        FidelityMode(shots=0)


def test_sampled_swap_test_clamps_negative_estimates():
    # orthogonal states give P0 = 0.5, so about half the estimates fall below 0
    vals = [encode.swap_test_fidelity([0.0], [math.pi / 2], FidelityMode.sampled(50, s))
            for s in range(40)]
    assert min(vals) == 0.0 and all(0.0 <= v <= 1.0 for v in vals)


def test_sampling_error_within_four_over_root_shots():
    rng = np.random.default_rng(0)
    for shots in (100, 10_000):
        bad = 0
        for t in range(1000):
            x, c = rng.uniform(0, math.pi, 2), rng.uniform(0, math.pi, 2)
            exact = encode.analytic_fidelity(x, c)
            mode = FidelityMode.sampled(shots, seed=t)
            for fn in (encode.swap_test_fidelity, encode.kernel_fidelity):
                bad += abs(fn(x, c, mode) - exact) > 4 / math.sqrt(shots)
        assert bad <= 0.01 * 2000


@pytest.mark.parametrize("circuit", ["swap_test", "quantum_kernel"])
@pytest.mark.parametrize("mode", [EXACT, FidelityMode.sampled(256, seed=3)])
def test_fidelity_matrix_matches_scalar_path(circuit, mode):
    rng = np.random.default_rng(2)
    X, C = rng.uniform(0, math.pi, (6, 2)), rng.uniform(0, math.pi, (3, 2))
    fn = encode.swap_test_fidelity if circuit == "swap_test" else encode.kernel_fidelity
    F = encode.fidelity_matrix(X, C, circuit, mode)
    expected = np.array([[fn(x, c, mode) for c in C] for x in X])
    np.testing.assert_allclose(F, expected, atol=1e-12)


def test_fidelity_matrix_rejects_bad_input():
    with pytest.raises(EncodingError):
        encode.fidelity_matrix([[4.0, 0.0]], [[0.0, 0.0]], "swap_test")
    with pytest.raises(UsageError):
        encode.fidelity_matrix([[0.0]], [[0.0, 0.0]], "swap_test")
    with pytest.raises(UsageError):
        encode.fidelity_matrix([[0.0]], [[0.0]], "nope")
