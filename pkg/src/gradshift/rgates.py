"""Two-eigenvalue gate generators and their closed-form unitaries."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL
from .errors import InternalConsistencyError, RGateValidation
from .statevector import HermitianOperator, UnitaryMatrix, eigendecompose


@dataclass(frozen=True, eq=False)
class RGate:
    """Gate ``exp(-i theta G)`` whose generator has eigenvalues ``+r`` and ``-r``.

    Build with :func:`make_r_gate`, which centers the spectrum when needed.
    """

    generator: HermitianOperator
    r: float
    was_centered: bool = False

    def __post_init__(self):
        if not self.r > 0:
            raise ValueError(f"r must be positive, got {self.r}")
        g = self.generator.matrix
        dev = np.max(np.abs(g @ g - self.r**2 * np.eye(g.shape[0])))
        if dev >= TOL.r_gate_square * max(1.0, self.r**2):
            raise InternalConsistencyError(f"G^2 != r^2 * 1 (max deviation {dev:.3e})")

    @property
    def dim(self) -> int:
        return self.generator.dim


def make_r_gate(generator: HermitianOperator, tol: float = TOL.degeneracy) -> RGate:
    spec = eigendecompose(generator, tol)
    n = len(spec.eigenvalues)
    if n != 2:
        raise RGateValidation(n)
    e1, e0 = spec.eigenvalues  # ascending
    r = (e0 - e1) / 2.0
    center = (e0 + e1) / 2.0
    scale = max(1.0, abs(e0), abs(e1))
    if abs(center) > tol * scale:
        # a global phase exp(i theta c) drops out of every expectation value
        centered = HermitianOperator(generator.matrix - center * np.eye(generator.dim))
        return RGate(centered, float(r), was_centered=True)
    return RGate(generator, float(r), was_centered=False)


def gate_matrix(gate: RGate, theta: float) -> UnitaryMatrix:
    return UnitaryMatrix(gate_array(gate, theta))


def gate_array(gate: RGate, theta: float) -> np.ndarray:
    """Raw ndarray form of ``cos(r theta) 1 - i (G/r) sin(r theta)`` (no validation)."""
    rt = gate.r * theta
    return np.cos(rt) * np.eye(gate.dim) - 1j * np.sin(rt) / gate.r * gate.generator.matrix
