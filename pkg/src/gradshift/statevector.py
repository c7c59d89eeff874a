"""Dense pure-state linear algebra on up to six qubits."""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from . import _kernels
from .config import MAX_QUBITS, TOL
from .errors import DimensionMismatch, InternalConsistencyError, NotHermitian, NotUnitary

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def _qubits_for_dim(dim: int) -> int:
    q = dim.bit_length() - 1
    if dim < 2 or 1 << q != dim:
        raise DimensionMismatch(f"dimension {dim} is not a power of two >= 2")
    if q > MAX_QUBITS:
        raise DimensionMismatch(f"{q} qubits exceeds the cap of {MAX_QUBITS}")
    return q


def _as_square(matrix) -> np.ndarray:
    m = np.array(matrix, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"expected a square matrix, got shape {m.shape}")
    _qubits_for_dim(m.shape[0])
    m.setflags(write=False)
    return m


@dataclass(frozen=True, eq=False)
class StateVector:
    amplitudes: np.ndarray
    q: int = field(init=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).ravel()
        object.__setattr__(self, "q", _qubits_for_dim(amps.size))
        norm = np.linalg.norm(amps)
        if abs(norm - 1.0) > TOL.norm:
            raise ValueError(f"state is not normalized (norm {norm!r})")
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def from_amplitudes(cls, amplitudes) -> StateVector:
        """Build a state from unnormalized amplitudes."""
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        norm = np.linalg.norm(amps)
        if norm == 0.0:
            raise ValueError("zero vector cannot be normalized")
        return cls(amps / norm)

    @classmethod
    def zero(cls, q: int) -> StateVector:
        amps = np.zeros(1 << q, dtype=complex)
        amps[0] = 1.0
        return cls(amps)

    @property
    def dim(self) -> int:
        return self.amplitudes.size


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square(self.matrix)
        dev = np.max(np.abs(m - m.conj().T))
        if dev >= TOL.hermitian:
            raise NotHermitian(f"max |A - A^dagger| = {dev:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def q(self) -> int:
        return _qubits_for_dim(self.dim)

    def __add__(self, other: HermitianOperator) -> HermitianOperator:
        return HermitianOperator(self.matrix + other.matrix)

    def __sub__(self, other: HermitianOperator) -> HermitianOperator:
        return HermitianOperator(self.matrix - other.matrix)

    def __mul__(self, scalar: float) -> HermitianOperator:
        return HermitianOperator(float(scalar) * self.matrix)

    __rmul__ = __mul__

    def __truediv__(self, scalar: float) -> HermitianOperator:
        return HermitianOperator(self.matrix / float(scalar))


@dataclass(frozen=True, eq=False)
class UnitaryMatrix:
    matrix: np.ndarray

    def __post_init__(self):
        m = _as_square(self.matrix)
        dev = np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0])))
        if dev >= TOL.unitary:
            raise NotUnitary(f"max |U^dagger U - 1| = {dev:.3e}")
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Distinct eigenvalues (ascending) with their orthogonal projectors.

    ``eigenvectors`` and ``labels`` keep the raw eigenbasis so Born
    probabilities can be computed without forming projectors.
    """

    eigenvalues: np.ndarray
    projectors: tuple
    eigenvectors: np.ndarray
    labels: np.ndarray

    def probabilities(self, state: StateVector) -> np.ndarray:
        amps = self.eigenvectors.conj().T @ state.amplitudes
        return _kernels.group_probabilities(amps, self.labels, len(self.eigenvalues))

    def reconstruct(self) -> np.ndarray:
        return sum(lam * p for lam, p in zip(self.eigenvalues, self.projectors))


def pauli_string(labels) -> HermitianOperator:
    """Tensor product of single-qubit Paulis; qubit 0 is the leftmost factor."""
    labels = list(labels)
    if not labels:
        raise ValueError("empty Pauli label list")
    try:
        factors = [PAULI[str(c).upper()] for c in labels]
    except KeyError as exc:
        raise ValueError(f"unknown Pauli label {exc.args[0]!r}") from None
    return HermitianOperator(reduce(np.kron, factors))


def _check_dims(a: int, b: int) -> None:
    if a != b:
        raise DimensionMismatch(f"dimension mismatch: {a} vs {b}")


def expectation(state: StateVector, obs: HermitianOperator) -> float:
    _check_dims(state.dim, obs.dim)
    val = _kernels.quadratic_form(state.amplitudes, obs.matrix)
    if abs(val.imag) >= TOL.imag_part * max(1.0, np.abs(obs.matrix).max()):
        raise InternalConsistencyError(f"expectation has imaginary part {val.imag:.3e}")
    return float(val.real)


def eigendecompose(obs: HermitianOperator, degeneracy_tol: float = TOL.degeneracy) -> Spectrum:
    """Spectral decomposition with near-equal eigenvalues merged.

    Eigenvalues closer than ``degeneracy_tol * max(1, ||A||)`` end up in the
    same group; the group's eigenvalue is the mean of its members.
    """
    try:
        vals, vecs = np.linalg.eigh(obs.matrix)
    except np.linalg.LinAlgError as exc:
        raise InternalConsistencyError(f"eigensolver failed: {exc}") from exc
    scale = max(1.0, float(np.max(np.abs(vals))))
    labels = np.zeros(vals.size, dtype=np.int64)
    for k in range(1, vals.size):
        labels[k] = labels[k - 1] + (vals[k] - vals[k - 1] > degeneracy_tol * scale)
    n_groups = int(labels[-1]) + 1
    eigenvalues = np.array([vals[labels == g].mean() for g in range(n_groups)])
    projectors = []
    for g in range(n_groups):
        v = vecs[:, labels == g]
        p = v @ v.conj().T
        p.setflags(write=False)
        projectors.append(p)
    for arr in (eigenvalues, vecs, labels):
        arr.setflags(write=False)
    return Spectrum(eigenvalues, tuple(projectors), vecs, labels)


def apply_unitary(state: StateVector, u: UnitaryMatrix) -> StateVector:
    _check_dims(state.dim, u.dim)
    return StateVector(u.matrix @ state.amplitudes)


def propagate(state: StateVector, mats: np.ndarray) -> StateVector:
    """Apply a stack of unitaries ``mats[0], mats[1], ...`` in order."""
    if mats.shape[0] == 0:
        return state
    _check_dims(state.dim, mats.shape[-1])
    return StateVector(_kernels.apply_chain(state.amplitudes, np.ascontiguousarray(mats)))
