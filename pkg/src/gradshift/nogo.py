"""Counterexample showing no two-point forward/backward shift rule exists.

Given ``f(t) = <psi| e^{itG} A e^{-itG} |psi>`` and a second r-gate ``F``,
build ``f~(t) = <zeta| e^{i(t-zeta)F} B e^{-i(t-zeta)F} |zeta>`` that agrees
with ``f`` at ``zeta`` and ``zeta + gamma`` but not in its derivative at
``zeta``. Any rule ``g[f(theta), f(theta + gamma)]`` would have to return two
different answers for identical inputs.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .config import TOL
from .costfn import Param, ParameterizedCircuit, SingleComponentFunction, restrict
from .errors import ConditionViolation
from .oracle import fit, nth_derivative_at
from .rgates import RGate, gate_array, make_r_gate
from .statevector import HermitianOperator, StateVector, pauli_string


@dataclass(frozen=True, eq=False)
class CounterexamplePair:
    f: SingleComponentFunction
    f_tilde: SingleComponentFunction
    zeta: float
    gamma: float
    c_perp_norm: float
    derivative_gap: float
    commutator_expectation: complex
    zeta_state: StateVector
    zeta_perp: np.ndarray
    correction: float
    B: HermitianOperator


@dataclass(frozen=True)
class NogoReport:
    value_gap_at_zeta: float
    value_gap_at_zeta_plus_gamma: float
    derivative_gap: float
    f_prime_commutator: float
    f_tilde_prime_commutator: float
    f_prime_oracle: float
    f_tilde_prime_oracle: float

    @property
    def derivative_agreement(self) -> float:
        """Largest disagreement between commutator-form and oracle-form derivatives."""
        return max(
            abs(self.f_prime_commutator - self.f_prime_oracle),
            abs(self.f_tilde_prime_commutator - self.f_tilde_prime_oracle),
        )


def _as_gate(g) -> RGate:
    return g if isinstance(g, RGate) else make_r_gate(g)


def _conj(u: np.ndarray) -> np.ndarray:
    return u.conj().T


def build_custom(G, F, A: HermitianOperator, psi: StateVector, zeta: float, gamma: float,
                 check_conditions: bool = True) -> CounterexamplePair:
    """Construct the pair for arbitrary generators, observable and state.

    ``check_conditions=False`` skips the two genericity checks (used to show
    the degenerate ``F = G`` case); ``c_perp`` must still be nonzero.
    """
    gG, gF = _as_gate(G), _as_gate(F)
    if abs(gG.r - gF.r) > TOL.r_gate_square * max(1.0, gG.r):
        raise ValueError(f"G and F must share r (got {gG.r} and {gF.r})")
    r = gG.r
    if not 0 < gamma < np.pi / r:
        raise ValueError(f"gamma must lie in (0, pi/r) = (0, {np.pi / r:.6g}), got {gamma!r}")

    a = A.matrix
    zeta_vec = gate_array(gG, zeta) @ psi.amplitudes
    ug, uf = gate_array(gG, gamma), gate_array(gF, gamma)
    moved = uf @ zeta_vec
    perp = moved - np.vdot(zeta_vec, moved) * zeta_vec
    c_perp = float(np.linalg.norm(perp))
    if c_perp < TOL.nogo_c_perp:
        raise ConditionViolation("c_perp", f"|c_perp| = {c_perp:.3e}; exp(-i gamma F)|zeta> is parallel to |zeta>")
    comm = gG.generator.matrix - gF.generator.matrix
    comm = comm @ a - a @ comm
    comm_exp = complex(np.vdot(zeta_vec, comm @ zeta_vec))
    # the expectation of a commutator of Hermitians is imaginary; test the modulus
    if check_conditions and abs(comm_exp) < TOL.nogo_commutator:
        raise ConditionViolation("commutator", f"|<zeta|[G-F, A]|zeta>| = {abs(comm_exp):.3e}")

    zperp = perp / c_perp
    f_g = np.vdot(zeta_vec, _conj(ug) @ a @ ug @ zeta_vec).real
    f_f = np.vdot(zeta_vec, _conj(uf) @ a @ uf @ zeta_vec).real
    # <moved|zperp> = c_perp, so this shift moves f~(zeta+gamma) from f_f onto f_g
    kappa = (f_g - f_f) / c_perp**2
    B = HermitianOperator(a + kappa * np.outer(zperp, zperp.conj()))

    f_circ = ParameterizedCircuit([Param(gG, 0)], psi, A)
    start = StateVector(gate_array(gF, -zeta) @ zeta_vec)
    ft_circ = ParameterizedCircuit([Param(gF, 0)], start, B)
    f = restrict(f_circ, [zeta], 0)
    ft = restrict(ft_circ, [zeta], 0)

    d = _commutator_derivative(gG, a, zeta_vec) - _commutator_derivative(gF, B.matrix, zeta_vec)
    return CounterexamplePair(
        f=f, f_tilde=ft, zeta=float(zeta), gamma=float(gamma), c_perp_norm=c_perp,
        derivative_gap=abs(d), commutator_expectation=comm_exp,
        zeta_state=StateVector(zeta_vec), zeta_perp=zperp, correction=float(kappa), B=B,
    )


def build_default(zeta: float = 0.3, gamma: float = 0.7) -> CounterexamplePair:
    """G = X, F = (Y + Z)/sqrt(2), A = Y and psi = exp(i zeta X)|0>, so |zeta> = |0>."""
    G = pauli_string("X")
    F = (pauli_string("Y") + pauli_string("Z")) / np.sqrt(2)
    A = pauli_string("Y")
    psi = StateVector(gate_array(make_r_gate(G), -zeta) @ np.array([1.0, 0.0], dtype=complex))
    return build_custom(G, F, A, psi, zeta, gamma)


def _commutator_derivative(gate: RGate, obs: np.ndarray, vec: np.ndarray) -> float:
    ig = 1j * gate.generator.matrix
    return float(np.vdot(vec, (ig @ obs - obs @ ig) @ vec).real)


def verify(pair: CounterexamplePair) -> NogoReport:
    z, g = pair.zeta, pair.gamma
    vec = pair.zeta_state.amplitudes
    f_gate = pair.f.circuit.gates_for(0)[0]
    ft_gate = pair.f_tilde.circuit.gates_for(0)[0]
    d_f = _commutator_derivative(f_gate, pair.f.circuit.observable.matrix, vec)
    d_ft = _commutator_derivative(ft_gate, pair.B.matrix, vec)
    o_f = nth_derivative_at(fit(pair.f), 1, z)
    o_ft = nth_derivative_at(fit(pair.f_tilde), 1, z)
    return NogoReport(
        value_gap_at_zeta=abs(pair.f(z) - pair.f_tilde(z)),
        value_gap_at_zeta_plus_gamma=abs(pair.f(z + g) - pair.f_tilde(z + g)),
        derivative_gap=abs(d_f - d_ft),
        f_prime_commutator=d_f,
        f_tilde_prime_commutator=d_ft,
        f_prime_oracle=o_f,
        f_tilde_prime_oracle=o_ft,
    )
