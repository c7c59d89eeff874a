import json

import numpy as np
import pytest

from gradshift.circuit_io import CircuitSpecError, bundled_path, circuit_from_dict, load_circuit
from gradshift.costfn import (
    EstimatorResult,
    Fixed,
    Param,
    ParameterizedCircuit,
    evaluate,
    one_shot_variance,
    restrict,
    sample_n_shots,
    sample_shots,
    sample_single_shot,
    shot_uniforms,
)
from gradshift.ensemble import random_ensemble
from gradshift.errors import DimensionMismatch, InternalConsistencyError
from gradshift.rgates import gate_matrix, make_r_gate
from gradshift.statevector import StateVector, pauli_string

from conftest import one_gate_circuit, z_eigenstate_circuit


def direct_cos_t(theta):
    """<X> after diag(e^{-i t/2}, e^{i t/2}) on |+>, written out by hand."""
    u = np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])
    psi = u @ (np.array([1, 1]) / np.sqrt(2))
    x = np.array([[0, 1], [1, 0]])
    return np.vdot(psi, x @ psi).real


@pytest.mark.parametrize("theta,expected", [(0.0, 1.0), (np.pi / 2, 0.0), (np.pi, -1.0)])
def test_evaluate_examples(cos_t, theta, expected):
    assert direct_cos_t(theta) == pytest.approx(expected, abs=1e-15)
    assert evaluate(cos_t, [theta]) == pytest.approx(expected, abs=1e-15)


def test_evaluate_length_mismatch(cos_t):
    with pytest.raises(DimensionMismatch):
        evaluate(cos_t, [0.1, 0.2])


def test_restrict_matches_full_evaluate(entangling):
    theta = np.array([0.4, -1.1, 0.8, 2.0])
    for i in range(entangling.n_params):
        f = restrict(entangling, theta, i)
        assert f(theta[i]) == evaluate(entangling, theta)
        t = 0.37
        moved = theta.copy()
        moved[i] = t
        assert f(t) == evaluate(entangling, moved)


def test_restricted_cos_t_on_grid(cos_f):
    for t in np.linspace(-np.pi, np.pi, 16):
        assert abs(cos_f(t) - np.cos(t)) < 1e-12


def test_restrict_freezes_other_components(entangling):
    f_a = restrict(entangling, [0.4, -1.1, 0.8, 2.0], 0)
    f_b = restrict(entangling, [0.4, 0.9, 0.8, 2.0], 0)
    grid = np.linspace(0, 2 * np.pi, 7)
    assert max(abs(f_a(t) - f_b(t)) for t in grid) > 1e-3


def test_restrict_errors(entangling):
    with pytest.raises(IndexError):
        restrict(entangling, np.zeros(4), 4)
    g = make_r_gate(pauli_string("Z") / 2)
    shared = ParameterizedCircuit([Param(g, 0), Param(g, 0)], StateVector.zero(1), pauli_string("X"))
    with pytest.raises(ValueError):
        restrict(shared, [0.0], 0)


def test_circuit_validation():
    g = make_r_gate(pauli_string("Z"))
    with pytest.raises(ValueError):
        ParameterizedCircuit([Param(g, 1)], StateVector.zero(1), pauli_string("X"))
    with pytest.raises(DimensionMismatch):
        ParameterizedCircuit([Param(g, 0)], StateVector.zero(2), pauli_string("XX"))


def test_single_shot_eigenstate():
    c = z_eigenstate_circuit()
    assert all(sample_single_shot(c, [0.3], seed=s) == 1.0 for s in range(20))


def test_x_on_zero_is_fair_coin():
    c = one_gate_circuit(pauli_string("Z") / 2, pauli_string("X"), StateVector.zero(1))
    n = 100_000
    x = sample_shots(c, [0.0], n, seed=1)
    assert set(np.unique(x)) == {-1.0, 1.0}
    assert abs(x.mean()) < 5 * 1.0 / np.sqrt(n)


def test_shot_mean_at_pi_over_3(cos_t):
    n = 100_000
    res = sample_n_shots(cos_t, [np.pi / 3], n, seed=2)
    sigma = np.sin(np.pi / 3)
    assert abs(res.mean - 0.5) < 5 * sigma / np.sqrt(n)


def test_n_shot_eigenstate_and_determinism(cos_t):
    res = sample_n_shots(z_eigenstate_circuit(), [1.0], 100, seed=3)
    assert res == EstimatorResult(1.0, 0.0, 100, 3)
    a = sample_n_shots(cos_t, [0.7], 1000, seed=42)
    b = sample_n_shots(cos_t, [0.7], 1000, seed=42)
    assert a == b
    assert sample_n_shots(cos_t, [0.7], 1000, seed=43) != a
    assert sample_n_shots(cos_t, [0.7], 1, seed=1).sample_variance == 0.0


def test_n_shot_variance_at_pi_over_2(cos_t):
    res = sample_n_shots(cos_t, [np.pi / 2], 100_000, seed=4)
    assert res.sample_variance == pytest.approx(1.0, rel=0.05)


def test_zero_shots_rejected(cos_t):
    with pytest.raises(ValueError):
        sample_n_shots(cos_t, [0.0], 0, seed=0)


def test_streams_are_chunkable():
    whole = shot_uniforms(77, 5, 1000)
    chunks = {s: shot_uniforms(77, 5, 250, start=s) for s in (750, 0, 500, 250)}
    np.testing.assert_array_equal(np.concatenate([chunks[s] for s in sorted(chunks)]), whole)
    np.testing.assert_array_equal(shot_uniforms(77, 5, 13, start=401), whole[401:414])
    assert not np.array_equal(shot_uniforms(77, 6, 1000), whole)


def test_seed_accepts_64_bit():
    a = shot_uniforms(2**64 - 1, 0, 4)
    assert a.shape == (4,) and np.all((a >= 0) & (a < 1))


@pytest.mark.parametrize("theta,expected", [(np.pi / 2, 1.0), (0.0, 0.0)])
def test_one_shot_variance_cos_t(cos_t, theta, expected):
    assert one_shot_variance(cos_t, [theta]) == pytest.approx(expected, abs=1e-14)


def test_one_shot_variance_eigenstate():
    assert one_shot_variance(z_eigenstate_circuit(), [0.4]) == 0.0


def test_estimator_consistency_over_seeds():
    (c, theta), = random_ensemble(21, 1, qubits=(2, 2))
    exact = evaluate(c, theta)
    sigma2 = one_shot_variance(c, theta)
    n = 10_000
    hits = sum(abs(sample_n_shots(c, theta, n, seed=s).mean - exact) < 5 * np.sqrt(sigma2 / n)
               for s in range(100))
    assert hits >= 99


def test_variance_law():
    for c, theta in random_ensemble(22, 3, qubits=(1, 3)):
        res = sample_n_shots(c, theta, 100_000, seed=5)
        assert res.sample_variance == pytest.approx(one_shot_variance(c, theta), rel=0.05)


def test_probability_sum_violation_detected(cos_t, monkeypatch):
    monkeypatch.setattr(type(cos_t.spectrum), "probabilities", lambda self, s: np.array([0.5, 0.6]))
    with pytest.raises(InternalConsistencyError):
        sample_shots(cos_t, [0.0], 5, seed=0)


# circuit spec files

def test_bundled_specs_load():
    for name in ("cos_t.json", "entangling_2q.json", "product_2q.json"):
        c = load_circuit(bundled_path(name))
        assert c.n_params >= 1


def test_spec_conventions():
    spec = {
        "qubits": 2,
        "observable": [[0.5, "ZI"], [-1.0, "XX"]],
        "initial_state": [1, [0, 1], 0, 0],
        "ops": [
            {"type": "param", "pauli": "Y", "scale": 0.5, "qubit": 1, "index": 0},
            {"type": "fixed", "pauli": "ZZ", "angle": 0.3},
            {"type": "fixed", "gate": "CNOT", "qubits": [0, 1]},
        ],
    }
    c = circuit_from_dict(spec)
    psi = np.array([1, 1j, 0, 0]) / np.sqrt(2)
    t = 0.9
    ry = np.kron(np.eye(2), np.cos(t / 2) * np.eye(2) - 1j * np.sin(t / 2) * np.array([[0, -1j], [1j, 0]]))
    zz = np.diag(np.exp(-0.3j * np.array([1, -1, -1, 1])))
    cnot = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]])
    out = cnot @ zz @ ry @ psi
    obs = 0.5 * np.kron(np.diag([1, -1]), np.eye(2)) - np.kron([[0, 1], [1, 0]], [[0, 1], [1, 0]])
    assert evaluate(c, [t]) == pytest.approx(np.vdot(out, obs @ out).real, abs=1e-14)


@pytest.mark.parametrize("bad", [
    {"qubits": 1, "observable": [], "ops": []},
    {"qubits": 1, "observable": [[1, "X"]], "ops": [{"type": "nope"}]},
    {"qubits": 2, "observable": [[1, "XX"]], "ops": [{"type": "param", "pauli": "Z", "index": 0}]},
    {"qubits": 1, "observable": [[1, "X"]], "initial_state": [1, 0, 0]},
    {"observable": [[1, "X"]]},
])
def test_bad_specs(bad):
    with pytest.raises(CircuitSpecError):
        circuit_from_dict(bad)
