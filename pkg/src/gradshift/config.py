"""Numerical tolerances used across the package.

All values are absolute unless noted. Keep them in one place so tests and
library code agree on what "equal" means.
"""
from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    hermitian: float = 1e-12
    unitary: float = 1e-12
    norm: float = 1e-12
    imag_part: float = 1e-12
    # relative to the spectral norm of the operator
    degeneracy: float = 1e-9
    projector: float = 1e-10
    r_gate_square: float = 1e-10
    probability_sum: float = 1e-10
    oracle_residual: float = 1e-10
    singular_shift: float = 1e-9
    zero_step: float = 1e-12
    nogo_c_perp: float = 1e-8
    nogo_commutator: float = 1e-8


TOL = Tolerances()

MAX_QUBITS = 6
