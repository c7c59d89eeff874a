"""Two-parameter evaluations: nested-shift Hessian and a shifted-sum identity check."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .costfn import ParameterizedCircuit, evaluate, restrict
from .gradrules import _check_shift, second_derivative

SHIFT_READINGS = ("literal", "scaled")


@dataclass(frozen=True, eq=False)
class TwoParamFunction:
    circuit: ParameterizedCircuit
    i: int
    j: int
    base_point: np.ndarray

    def __post_init__(self):
        if self.circuit.n_params < 2:
            raise ValueError("circuit needs at least two parameters")
        if self.i == self.j:
            raise ValueError("indices must differ")
        base = np.array(self.base_point, dtype=float)
        base.setflags(write=False)
        object.__setattr__(self, "base_point", base)
        # validates the indices and that each drives exactly one r-gate
        object.__setattr__(self, "r_i", restrict(self.circuit, base, self.i).r)
        object.__setattr__(self, "r_j", restrict(self.circuit, base, self.j).r)

    def theta_at(self, t1: float, t2: float) -> np.ndarray:
        theta = self.base_point.copy()
        theta[self.i] = t1
        theta[self.j] = t2
        return theta

    def __call__(self, t1: float, t2: float) -> float:
        return evaluate(self.circuit, self.theta_at(t1, t2))

    def axis(self, which: int, t1: float, t2: float):
        """Single-component function along axis 0 (``t1``) or 1 (``t2``)."""
        idx = self.i if which == 0 else self.j
        return restrict(self.circuit, self.theta_at(t1, t2), idx)


def eval2(f2: TwoParamFunction, t1: float, t2: float) -> float:
    return f2(t1, t2)


def _cpsr_weight(r: float, gamma: float) -> float:
    return r / _check_shift(r, gamma)


def mixed_partial(f2: TwoParamFunction, t1: float, t2: float,
                  gamma1: float | None = None, gamma2: float | None = None,
                  order: str = "12") -> float:
    """d^2 f / dt1 dt2 by nesting centered shift rules.

    ``order="12"`` applies the t1 rule to the t2 rule's output; ``"21"`` the
    reverse. Both use the same four evaluations, summed in different order.
    """
    r1, r2 = f2.r_i, f2.r_j
    g1 = np.pi / (4 * r1) if gamma1 is None else gamma1
    g2 = np.pi / (4 * r2) if gamma2 is None else gamma2
    w1, w2 = _cpsr_weight(r1, g1), _cpsr_weight(r2, g2)
    if order == "12":
        inner = [w2 * (f2(t1 + s * g1, t2 + g2) - f2(t1 + s * g1, t2 - g2)) for s in (1, -1)]
        return w1 * (inner[0] - inner[1])
    if order == "21":
        inner = [w1 * (f2(t1 + g1, t2 + s * g2) - f2(t1 - g1, t2 + s * g2)) for s in (1, -1)]
        return w2 * (inner[0] - inner[1])
    raise ValueError(f"order must be '12' or '21', got {order!r}")


def hessian_2x2(f2: TwoParamFunction, t1: float, t2: float,
                gamma1: float | None = None, gamma2: float | None = None) -> np.ndarray:
    h11 = second_derivative(f2.axis(0, t1, t2), t1)
    h22 = second_derivative(f2.axis(1, t1, t2), t2)
    h12 = mixed_partial(f2, t1, t2, gamma1, gamma2, order="12")
    h21 = mixed_partial(f2, t1, t2, gamma1, gamma2, order="21")
    return np.array([[h11, h12], [h21, h22]])


def hessian_fd(f2: TwoParamFunction, t1: float, t2: float, h: float = 1e-3) -> np.ndarray:
    """Second-order central finite-difference Hessian."""
    f0 = f2(t1, t2)
    h11 = (f2(t1 + h, t2) - 2 * f0 + f2(t1 - h, t2)) / h**2
    h22 = (f2(t1, t2 + h) - 2 * f0 + f2(t1, t2 - h)) / h**2
    h12 = (f2(t1 + h, t2 + h) - f2(t1 + h, t2 - h) - f2(t1 - h, t2 + h) + f2(t1 - h, t2 - h)) / (4 * h * h)
    return np.array([[h11, h12], [h12, h22]])


@dataclass(frozen=True)
class IdentityResidualReport:
    lhs: float
    rhs: float
    residual: float
    t1: float
    t2: float
    gamma1: float
    gamma2: float
    r: float
    reading: str
    hessian: tuple


def check_discussion_identity(f2: TwoParamFunction, t1: float, t2: float,
                              gamma1: float, gamma2: float,
                              reading: str = "literal") -> IdentityResidualReport:
    """Evaluate both sides of the three-point Hessian combination and report the gap.

    LHS: ``f(t1+g1, t2+g2) + f(t1-g1, t2-g2) - 2 sin^2(r g1) sin^2(r g2) f(t1+s, t2+s)``
    with ``s = pi/2`` (``reading="literal"``) or ``s = pi/(2r)`` (``"scaled"``).
    RHS: ``2 sin(2r g1) sin(2r g2) H12 + cos^2(r g2)(5 - 3cos(2r g1)) H11 / 4
    + cos^2(r g1)(5 - 3cos(2r g2)) H22 / 4``. Nothing here asserts they match.
    """
    if reading not in SHIFT_READINGS:
        raise ValueError(f"reading must be one of {SHIFT_READINGS}, got {reading!r}")
    r = f2.r_i
    if not np.isclose(r, f2.r_j, rtol=0, atol=1e-12):
        raise ValueError(f"both gates must share r (got {f2.r_i} and {f2.r_j})")
    s = np.pi / 2 if reading == "literal" else np.pi / (2 * r)
    lhs = (
        f2(t1 + gamma1, t2 + gamma2)
        + f2(t1 - gamma1, t2 - gamma2)
        - 2 * np.sin(r * gamma1) ** 2 * np.sin(r * gamma2) ** 2 * f2(t1 + s, t2 + s)
    )
    H = hessian_2x2(f2, t1, t2)
    rhs = (
        2 * np.sin(2 * r * gamma1) * np.sin(2 * r * gamma2) * H[0, 1]
        + 0.25 * np.cos(r * gamma2) ** 2 * (5 - 3 * np.cos(2 * r * gamma1)) * H[0, 0]
        + 0.25 * np.cos(r * gamma1) ** 2 * (5 - 3 * np.cos(2 * r * gamma2)) * H[1, 1]
    )
    return IdentityResidualReport(
        lhs=float(lhs), rhs=float(rhs), residual=float(abs(lhs - rhs)),
        t1=float(t1), t2=float(t2), gamma1=float(gamma1), gamma2=float(gamma2),
        r=float(r), reading=reading, hessian=tuple(map(tuple, H.tolist())),
    )
