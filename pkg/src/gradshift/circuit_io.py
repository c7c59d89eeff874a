"""JSON circuit specs.

Format::

    {
      "qubits": 2,
      "observable": [[0.5, "ZZ"], [1.0, "XI"]],
      "initial_state": "zero" | "plus" | [amplitude, ...],
      "ops": [
        {"type": "param", "pauli": "Z", "scale": 0.5, "qubit": 0, "index": 0},
        {"type": "fixed", "pauli": "ZZ", "angle": 0.785},
        {"type": "fixed", "gate": "CNOT", "qubits": [0, 1]}
      ]
    }

A ``pauli`` label either spans all qubits or is placed on ``qubit`` (one
letter) / ``qubits`` (one letter per listed qubit). Qubit 0 is the most
significant bit. ``param`` ops use generator ``scale * P``; ``fixed`` Pauli
ops apply ``exp(-i angle P)``. Amplitudes are numbers or ``[re, im]`` pairs
and are normalized on load.
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .costfn import Fixed, Param, ParameterizedCircuit
from .rgates import gate_matrix, make_r_gate
from .statevector import HermitianOperator, StateVector, UnitaryMatrix, pauli_string

_H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)
_S = np.diag([1, 1j])


class CircuitSpecError(ValueError):
    pass


def _full_label(op: dict, q: int) -> str:
    label = str(op["pauli"]).upper()
    if "qubit" in op:
        targets = [int(op["qubit"])]
    elif "qubits" in op:
        targets = [int(t) for t in op["qubits"]]
    else:
        if len(label) != q:
            raise CircuitSpecError(f"Pauli label {label!r} needs {q} letters or a qubit/qubits field")
        return label
    if len(label) != len(targets):
        raise CircuitSpecError(f"label {label!r} does not match qubits {targets}")
    chars = ["I"] * q
    for t, c in zip(targets, label):
        if not 0 <= t < q:
            raise CircuitSpecError(f"qubit {t} out of range for {q} qubits")
        chars[t] = c
    return "".join(chars)


def _embed(u: np.ndarray, targets: list[int], q: int) -> np.ndarray:
    """Lift a gate on ``targets`` (ordered) to the full register."""
    k = len(targets)
    full = np.zeros((1 << q, 1 << q), dtype=complex)
    rest = [t for t in range(q) if t not in targets]
    u = u.reshape([2] * (2 * k))
    for col in range(1 << q):
        bits = [(col >> (q - 1 - t)) & 1 for t in range(q)]
        sub_in = tuple(bits[t] for t in targets)
        block = u[(Ellipsis,) + sub_in].reshape(-1)
        for idx, amp in enumerate(block):
            if amp == 0:
                continue
            out_bits = list(bits)
            for pos, t in enumerate(targets):
                out_bits[t] = (idx >> (k - 1 - pos)) & 1
            row = sum(b << (q - 1 - t) for t, b in enumerate(out_bits))
            full[row, col] += amp
    return full


_NAMED = {
    "H": (_H, 1),
    "S": (_S, 1),
    "CNOT": (np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex), 2),
    "CZ": (np.diag([1, 1, 1, -1]).astype(complex), 2),
}


def _initial_state(spec, q: int) -> StateVector:
    if spec in (None, "zero"):
        return StateVector.zero(q)
    if spec == "plus":
        return StateVector.from_amplitudes(np.ones(1 << q))
    if isinstance(spec, str):
        raise CircuitSpecError(f"unknown initial_state {spec!r}")
    amps = [complex(a[0], a[1]) if isinstance(a, (list, tuple)) else complex(a) for a in spec]
    if len(amps) != 1 << q:
        raise CircuitSpecError(f"initial_state has {len(amps)} amplitudes, expected {1 << q}")
    return StateVector.from_amplitudes(amps)


def circuit_from_dict(spec: dict) -> ParameterizedCircuit:
    try:
        q = int(spec["qubits"])
        terms = spec["observable"]
        if not terms:
            raise CircuitSpecError("observable needs at least one term")
        obs = sum((float(c) * pauli_string(p).matrix for c, p in terms), np.zeros((1 << q, 1 << q), dtype=complex))
        observable = HermitianOperator(obs)
        ops = []
        for op in spec.get("ops", []):
            kind = op.get("type")
            if kind == "param":
                gen = float(op.get("scale", 1.0)) * pauli_string(_full_label(op, q))
                ops.append(Param(make_r_gate(gen), int(op["index"])))
            elif kind == "fixed" and "gate" in op:
                u, k = _NAMED[str(op["gate"]).upper()]
                targets = [int(t) for t in op.get("qubits", [op.get("qubit", 0)])]
                if len(targets) != k:
                    raise CircuitSpecError(f"gate {op['gate']} acts on {k} qubit(s), got {targets}")
                ops.append(Fixed(UnitaryMatrix(_embed(u, targets, q))))
            elif kind == "fixed":
                gate = make_r_gate(pauli_string(_full_label(op, q)))
                ops.append(Fixed(gate_matrix(gate, float(op["angle"]))))
            else:
                raise CircuitSpecError(f"unknown op type {kind!r}")
        return ParameterizedCircuit(ops, _initial_state(spec.get("initial_state"), q), observable)
    except (KeyError, TypeError) as exc:
        raise CircuitSpecError(f"malformed circuit spec: {exc!r}") from exc


def load_circuit(path) -> ParameterizedCircuit:
    with open(path) as fh:
        return circuit_from_dict(json.load(fh))


def bundled_path(name: str) -> Path:
    """Path of a circuit spec shipped in ``gradshift/data``."""
    return Path(__file__).parent / "data" / name
