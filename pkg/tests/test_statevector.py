import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gradshift.errors import DimensionMismatch, NotHermitian
from gradshift.statevector import (
    HermitianOperator,
    StateVector,
    UnitaryMatrix,
    apply_unitary,
    eigendecompose,
    expectation,
    pauli_string,
)

PLUS = StateVector.from_amplitudes([1, 1])
ZERO = StateVector.zero(1)
X = pauli_string("X")
Z = pauli_string("Z")


def random_hermitian(rng, dim):
    m = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return HermitianOperator((m + m.conj().T) / 2)


def random_unitary(rng, dim):
    q, _ = np.linalg.qr(rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim)))
    return UnitaryMatrix(q)


def test_pauli_z():
    np.testing.assert_array_equal(Z.matrix, np.diag([1, -1]))


def test_pauli_xi_spectrum():
    xi = pauli_string(["X", "I"])
    assert xi.matrix.shape == (4, 4)
    np.testing.assert_allclose(np.linalg.eigvalsh(xi.matrix), [-1, -1, 1, 1], atol=1e-14)
    np.testing.assert_array_equal(xi.matrix, np.kron([[0, 1], [1, 0]], np.eye(2)))


def test_pauli_errors():
    with pytest.raises(ValueError):
        pauli_string([])
    with pytest.raises(ValueError):
        pauli_string("Q")


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from("IXYZ"), min_size=1, max_size=6))
def test_pauli_involution(labels):
    p = pauli_string(labels).matrix
    assert np.max(np.abs(p @ p - np.eye(p.shape[0]))) < 1e-12


@pytest.mark.parametrize("state,obs,expected", [(PLUS, X, 1.0), (ZERO, X, 0.0), (ZERO, Z, 1.0)])
def test_expectation_examples(state, obs, expected):
    assert expectation(state, obs) == pytest.approx(expected, abs=1e-15)


def test_expectation_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        expectation(ZERO, pauli_string("XX"))


def test_not_hermitian():
    with pytest.raises(NotHermitian):
        HermitianOperator([[0, 1], [0, 0]])


def test_state_must_be_normalized():
    with pytest.raises(ValueError):
        StateVector([1.0, 1.0])
    with pytest.raises(DimensionMismatch):
        StateVector.from_amplitudes([1.0, 0.0, 0.0])


def test_eigendecompose_z():
    s = eigendecompose(Z)
    np.testing.assert_array_equal(s.eigenvalues, [-1, 1])
    np.testing.assert_allclose(s.projectors[1], np.diag([1, 0]), atol=1e-14)
    np.testing.assert_allclose(s.projectors[0], np.diag([0, 1]), atol=1e-14)


def test_eigendecompose_identity_merges():
    s = eigendecompose(pauli_string("II"))
    assert list(s.eigenvalues) == [1.0]
    np.testing.assert_allclose(s.projectors[0], np.eye(4), atol=1e-14)


def test_eigendecompose_x_reconstructs():
    s = eigendecompose(X)
    assert np.max(np.abs(s.reconstruct() - X.matrix)) < 1e-10


@pytest.mark.parametrize("dim", [2, 4, 8, 16, 32, 64])
def test_spectrum_invariants(dim):
    rng = np.random.default_rng(dim)
    a = random_hermitian(rng, dim)
    s = eigendecompose(a)
    assert np.max(np.abs(s.reconstruct() - a.matrix)) < 1e-10
    total = sum(s.projectors)
    assert np.max(np.abs(total - np.eye(dim))) < 1e-10
    for i, p in enumerate(s.projectors):
        assert np.max(np.abs(p @ p - p)) < 1e-10
        for q in s.projectors[i + 1:]:
            assert np.max(np.abs(p @ q)) < 1e-10


def test_degenerate_observable_groups():
    a = pauli_string("ZI") + pauli_string("IZ")  # eigenvalues 2, 0, 0, -2
    s = eigendecompose(a)
    np.testing.assert_allclose(s.eigenvalues, [-2, 0, 2], atol=1e-12)
    assert [int(round(np.trace(p).real)) for p in s.projectors] == [1, 2, 1]


def test_apply_unitary_examples():
    ident = UnitaryMatrix(np.eye(2))
    np.testing.assert_array_equal(apply_unitary(PLUS, ident).amplitudes, PLUS.amplitudes)
    xu = UnitaryMatrix(X.matrix)
    one = apply_unitary(ZERO, xu)
    np.testing.assert_array_equal(one.amplitudes, [0, 1])
    np.testing.assert_array_equal(apply_unitary(one, xu).amplitudes, ZERO.amplitudes)


@pytest.mark.parametrize("seed", range(10))
def test_unitary_preserves_norm_and_expectation_is_real(seed):
    rng = np.random.default_rng(seed)
    dim = 2 ** int(rng.integers(1, 7))
    state = StateVector.from_amplitudes(rng.normal(size=dim) + 1j * rng.normal(size=dim))
    out = apply_unitary(state, random_unitary(rng, dim))
    assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-12
    a = random_hermitian(rng, dim)
    val = np.vdot(out.amplitudes, a.matrix @ out.amplitudes)
    assert abs(val.imag) < 1e-12
    assert expectation(out, a) == pytest.approx(val.real, abs=1e-12)


def test_qubit_cap():
    with pytest.raises(DimensionMismatch):
        StateVector.zero(7)
