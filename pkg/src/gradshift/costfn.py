"""Parameterized circuits, exact cost functions and shot-based estimators.

Convention: a ``Param(gate, i)`` element applies ``exp(-i theta_i G)`` to the
ket, so a one-gate circuit evaluates ``<psi| e^{i t G} A e^{-i t G} |psi>``.
Writing the cost as ``<psi| U A U^dagger |psi>`` instead only relabels
``theta -> -theta``.

Shot sampling is driven by a counter-based generator (Philox). Shot ``k`` of
stream ``s`` under ``seed`` is a pure function of ``(seed, s, k)``, so batches
can be split into chunks and drawn in any order.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence, Union

import numpy as np

from . import _kernels
from .config import TOL
from .errors import DimensionMismatch, InternalConsistencyError
from .rgates import RGate, gate_array
from .statevector import (
    HermitianOperator,
    Spectrum,
    StateVector,
    UnitaryMatrix,
    eigendecompose,
    expectation,
    propagate,
)

_UINT64 = 1 << 64


@dataclass(frozen=True, eq=False)
class Fixed:
    unitary: UnitaryMatrix


@dataclass(frozen=True, eq=False)
class Param:
    gate: RGate
    index: int


Op = Union[Fixed, Param]


@dataclass(frozen=True)
class EstimatorResult:
    mean: float
    sample_variance: float
    shots: int
    seed: int

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.sample_variance < 0:
            raise ValueError("sample_variance must be >= 0")


class ParameterizedCircuit:
    """Ordered gate list acting on an initial state, measured with one observable."""

    def __init__(self, ops: Sequence[Op], initial_state: StateVector, observable: HermitianOperator):
        self.ops = tuple(ops)
        self.initial_state = initial_state
        self.observable = observable
        self.q = initial_state.q
        if observable.dim != initial_state.dim:
            raise DimensionMismatch(
                f"observable dimension {observable.dim} != state dimension {initial_state.dim}"
            )
        indices = []
        for op in self.ops:
            if isinstance(op, Fixed):
                dim = op.unitary.dim
            elif isinstance(op, Param):
                dim = op.gate.dim
                if op.index < 0:
                    raise ValueError(f"negative parameter index {op.index}")
                indices.append(int(op.index))
            else:
                raise TypeError(f"unsupported circuit element {op!r}")
            if dim != initial_state.dim:
                raise DimensionMismatch(f"gate dimension {dim} != state dimension {initial_state.dim}")
        self.n_params = max(indices) + 1 if indices else 0
        missing = sorted(set(range(self.n_params)) - set(indices))
        if missing:
            raise ValueError(f"parameter indices {missing} never appear in the circuit")

    def __repr__(self) -> str:
        return f"ParameterizedCircuit(q={self.q}, n_ops={len(self.ops)}, n_params={self.n_params})"

    @cached_property
    def spectrum(self) -> Spectrum:
        return eigendecompose(self.observable)

    @cached_property
    def _observable_squared(self) -> np.ndarray:
        a = self.observable.matrix
        return a @ a

    def gates_for(self, index: int) -> list[RGate]:
        return [op.gate for op in self.ops if isinstance(op, Param) and op.index == index]

    def _theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=float).ravel()
        if theta.size != self.n_params:
            raise DimensionMismatch(f"expected {self.n_params} parameters, got {theta.size}")
        return theta

    def matrices(self, theta) -> np.ndarray:
        theta = self._theta(theta)
        mats = np.empty((len(self.ops), self.initial_state.dim, self.initial_state.dim), dtype=complex)
        for k, op in enumerate(self.ops):
            if isinstance(op, Fixed):
                mats[k] = op.unitary.matrix
            else:
                mats[k] = gate_array(op.gate, theta[op.index])
        return mats

    def state(self, theta) -> StateVector:
        return propagate(self.initial_state, self.matrices(theta))


def evaluate(circuit: ParameterizedCircuit, theta) -> float:
    return expectation(circuit.state(theta), circuit.observable)


@dataclass(frozen=True, eq=False)
class SingleComponentFunction:
    """``t -> F(theta)`` with component ``component`` replaced by ``t``."""

    circuit: ParameterizedCircuit
    base_point: np.ndarray
    component: int
    r: float

    def theta_at(self, t: float) -> np.ndarray:
        theta = np.array(self.base_point, dtype=float)
        theta[self.component] = t
        return theta

    @property
    def base_value(self) -> float:
        return float(self.base_point[self.component])

    def __call__(self, t: float) -> float:
        return evaluate(self.circuit, self.theta_at(t))

    def one_shot_variance(self, t: float) -> float:
        return one_shot_variance(self.circuit, self.theta_at(t))

    def sample_shots(self, t: float, n: int, seed: int, stream: int = 0) -> np.ndarray:
        return sample_shots(self.circuit, self.theta_at(t), n, seed, stream)


def restrict(circuit: ParameterizedCircuit, theta, i: int) -> SingleComponentFunction:
    theta = circuit._theta(theta)
    if not 0 <= i < circuit.n_params:
        raise IndexError(f"component {i} out of range for {circuit.n_params} parameters")
    gates = circuit.gates_for(i)
    if len(gates) != 1:
        raise ValueError(
            f"parameter {i} drives {len(gates)} gates; a single-component function needs exactly one"
        )
    base = theta.copy()
    base.setflags(write=False)
    return SingleComponentFunction(circuit, base, i, gates[0].r)


def shot_uniforms(seed: int, stream: int, n: int, start: int = 0) -> np.ndarray:
    """Uniforms for shots ``start .. start+n-1`` of ``stream`` under ``seed``."""
    key = np.array([int(seed) % _UINT64, int(stream) % _UINT64], dtype=np.uint64)
    bitgen = np.random.Philox(key=key)
    # Philox yields four 64-bit words per counter step, one word per double
    block, lane = divmod(int(start), 4)
    if block:
        bitgen.advance(block)
    return np.random.Generator(bitgen).random(lane + n)[lane:]


def born_cdf(spectrum: Spectrum, state: StateVector) -> np.ndarray:
    p = spectrum.probabilities(state)
    total = p.sum()
    if abs(total - 1.0) > TOL.probability_sum:
        raise InternalConsistencyError(f"Born probabilities sum to {total!r}")
    p = np.clip(p, 0.0, 1.0)
    cdf = np.cumsum(p / p.sum())
    cdf[-1] = 1.0
    return cdf


def sample_shots(circuit: ParameterizedCircuit, theta, n: int, seed: int, stream: int = 0) -> np.ndarray:
    """Draw ``n`` single-shot eigenvalue outcomes of the observable."""
    if n < 1:
        raise ValueError("shot count must be >= 1")
    spectrum = circuit.spectrum
    cdf = born_cdf(spectrum, circuit.state(theta))
    return _kernels.inverse_cdf(cdf, spectrum.eigenvalues, shot_uniforms(seed, stream, n))


def sample_single_shot(circuit: ParameterizedCircuit, theta, seed: int, stream: int = 0) -> float:
    return float(sample_shots(circuit, theta, 1, seed, stream)[0])


def summarize(samples: np.ndarray, seed: int) -> EstimatorResult:
    n = samples.size
    var = float(np.var(samples, ddof=1)) if n > 1 else 0.0
    return EstimatorResult(float(np.mean(samples)), var, n, int(seed))


def sample_n_shots(circuit: ParameterizedCircuit, theta, n: int, seed: int, stream: int = 0) -> EstimatorResult:
    if n < 1:
        raise ValueError("shot count must be >= 1")
    return summarize(sample_shots(circuit, theta, n, seed, stream), seed)


def one_shot_variance(circuit: ParameterizedCircuit, theta) -> float:
    state = circuit.state(theta)
    mean = expectation(state, circuit.observable)
    second = _kernels.quadratic_form(state.amplitudes, circuit._observable_squared).real
    return max(0.0, float(second - mean * mean))
