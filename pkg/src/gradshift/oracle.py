"""Exact ``a0 + a1 cos(2rt) + b1 sin(2rt)`` representation of r-gate cost functions.

Every single-component expectation value driven by one r-gate has this form,
so three samples pin it down and all derivatives follow analytically. This is
the ground truth that the shift rules are checked against.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .config import TOL
from .errors import NotAnRGateFunction

# deterministic spread of residual-check points over one period, in units of 2*pi/r
_CHECK_FRACTIONS = (np.arange(8) * 0.6180339887498949 + 0.1234) % 1.0


@dataclass(frozen=True)
class TrigPoly:
    a0: float
    a1: float
    b1: float
    r: float

    def __call__(self, t):
        return eval_poly(self, t)

    @property
    def coefficients(self) -> tuple[float, float, float]:
        return (self.a0, self.a1, self.b1)


def fit(f: Callable[[float], float], r: float | None = None, tol: float = TOL.oracle_residual) -> TrigPoly:
    """Fit from samples at ``0, pi/(4r), pi/(2r)`` and check 8 more points.

    ``f`` is any callable with an ``r`` attribute (e.g. a
    :class:`~gradshift.costfn.SingleComponentFunction`), or pass ``r``.
    """
    if r is None:
        r = f.r
    r = float(r)
    f0, fq, fh = f(0.0), f(np.pi / (4 * r)), f(np.pi / (2 * r))
    a0 = (f0 + fh) / 2
    p = TrigPoly(a0, (f0 - fh) / 2, fq - a0, r)
    ts = _CHECK_FRACTIONS * (2 * np.pi / r)
    resid = max(abs(eval_poly(p, t) - f(t)) for t in ts)
    scale = max(1.0, abs(p.a0), abs(p.a1), abs(p.b1))
    if resid >= tol * scale:
        raise NotAnRGateFunction(
            f"max residual {resid:.3e} of the trig fit exceeds {tol:g}; the gate is not an r-gate"
        )
    return p


def derivative(p: TrigPoly, n: int = 1) -> TrigPoly:
    if n < 0:
        raise ValueError("derivative order must be >= 0")
    if n == 0:
        return p
    w = 2 * p.r
    a1, b1 = p.a1, p.b1
    for _ in range(n):
        a1, b1 = w * b1, -w * a1
    return TrigPoly(0.0, a1, b1, p.r)


def eval_poly(p: TrigPoly, t):
    wt = 2 * p.r * np.asarray(t, dtype=float)
    out = p.a0 + p.a1 * np.cos(wt) + p.b1 * np.sin(wt)
    return float(out) if np.ndim(out) == 0 else out


def nth_derivative_at(p: TrigPoly, n: int, t: float) -> float:
    return eval_poly(derivative(p, n), t)
