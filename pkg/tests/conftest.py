import numpy as np
import pytest

from gradshift.circuit_io import bundled_path, load_circuit
from gradshift.costfn import Fixed, Param, ParameterizedCircuit, restrict
from gradshift.rgates import gate_matrix, make_r_gate
from gradshift.statevector import HermitianOperator, StateVector, pauli_string

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def cos_t():
    """exp(-i t Z/2) on |+>, measured in X: f(t) = cos t, r = 1/2."""
    return load_circuit(bundled_path("cos_t.json"))


@pytest.fixture
def cos_f(cos_t):
    return restrict(cos_t, [0.0], 0)


@pytest.fixture
def entangling():
    return load_circuit(bundled_path("entangling_2q.json"))


def one_gate_circuit(generator, observable, state) -> ParameterizedCircuit:
    return ParameterizedCircuit([Param(make_r_gate(generator), 0)], state, observable)


def z_eigenstate_circuit():
    """Every shift leaves |0> an eigenstate of Z: sigma_1^2 == 0."""
    return one_gate_circuit(pauli_string("Z") / 2, pauli_string("Z"), StateVector.zero(1))
