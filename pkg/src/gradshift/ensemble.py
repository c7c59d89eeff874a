"""Seeded random circuits used by the verification suites."""
from __future__ import annotations

import numpy as np

from .costfn import Fixed, Param, ParameterizedCircuit
from .rgates import gate_matrix, make_r_gate
from .statevector import HermitianOperator, StateVector, pauli_string

R_CHOICES = (0.5, 1.0, 1.3)


def random_pauli_label(rng: np.random.Generator, q: int) -> str:
    while True:
        label = "".join(rng.choice(list("IXYZ"), size=q))
        if set(label) != {"I"}:
            return label


def random_observable(rng: np.random.Generator, q: int, max_terms: int = 3) -> HermitianOperator:
    n_terms = int(rng.integers(1, max_terms + 1))
    m = sum(rng.uniform(-1, 1) * pauli_string(random_pauli_label(rng, q)).matrix for _ in range(n_terms))
    return HermitianOperator(m)


def random_state(rng: np.random.Generator, q: int) -> StateVector:
    return StateVector.from_amplitudes(rng.normal(size=1 << q) + 1j * rng.normal(size=1 << q))


def random_circuit(
    rng: np.random.Generator,
    q: int,
    n_params: int,
    r_choices=R_CHOICES,
    shared_r: float | None = None,
    n_fixed: int | None = None,
) -> ParameterizedCircuit:
    """Parameterized Pauli-string gates interleaved with fixed Pauli rotations.

    Each parameter drives exactly one gate with generator ``r * P``.
    ``shared_r`` forces one r for every gate.
    """
    if n_fixed is None:
        n_fixed = n_params
    ops = []
    order = rng.permutation(n_params)
    for k in range(max(n_params, n_fixed)):
        if k < n_fixed:
            g = make_r_gate(pauli_string(random_pauli_label(rng, q)))
            ops.append(Fixed(gate_matrix(g, float(rng.uniform(0, 2 * np.pi)))))
        if k < n_params:
            r = shared_r if shared_r is not None else float(rng.choice(r_choices))
            ops.append(Param(make_r_gate(r * pauli_string(random_pauli_label(rng, q))), int(order[k])))
    return ParameterizedCircuit(ops, random_state(rng, q), random_observable(rng, q))


def random_ensemble(seed: int, count: int, qubits=(1, 4), max_params: int = 3, **kwargs):
    """``count`` circuits with ``qubits[0]..qubits[1]`` qubits and random base points."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        q = int(rng.integers(qubits[0], qubits[1] + 1))
        n = int(rng.integers(1, max_params + 1))
        c = random_circuit(rng, q, n, **kwargs)
        theta = rng.uniform(-np.pi, np.pi, size=n)
        out.append((c, theta))
    return out
