"""Single-component gradient rules built on the generalized shift rule.

``g_gpsr(theta, g1, g2) = r [f(theta + g1) - f(theta - g2)]`` equals
``a f'(theta) + b f''(theta)`` with

    a = (sin(2 r g1) + sin(2 r g2)) / 2
    b = -(cos(2 r g1) - cos(2 r g2)) / (4 r)

for every function generated by an r-gate. The centered shift rule and the
three finite-difference quotients are special cases, which gives their bias
in closed form. Rule functions accept any callable ``f`` exposing an ``r``
attribute: a :class:`~gradshift.costfn.SingleComponentFunction` or a
:class:`~gradshift.oracle.TrigPoly`.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .config import TOL
from .costfn import EstimatorResult, ParameterizedCircuit, evaluate, restrict, sample_n_shots
from .errors import SingularShift, ZeroStep
from .oracle import TrigPoly, fit, nth_derivative_at

RULE_KINDS = ("gPSR", "cPSR", "cFD", "bFD", "fFD", "second-derivative")
FD_KINDS = ("cFD", "bFD", "fFD")
ESTIMATOR_KINDS = ("cPSR", "cFD", "bFD", "fFD")


def _check_step(h: float) -> None:
    if abs(h) <= TOL.zero_step:
        raise ZeroStep(f"finite-difference step {h!r} is zero")


def _check_shift(r: float, gamma: float) -> float:
    s = np.sin(2 * r * gamma)
    if abs(s) <= TOL.singular_shift:
        raise SingularShift(f"sin(2 r gamma) = {s:.3e} for gamma = {gamma!r}, r = {r!r}")
    return float(s)


def default_step(kind: str, r: float) -> float:
    if kind == "cPSR":
        return np.pi / (4 * r)
    if kind in FD_KINDS:
        return 0.05 / r
    raise ValueError(f"rule {kind!r} has no default step")


@dataclass(frozen=True)
class GradientRuleSpec:
    """A rule as a list of ``(offset, weight)`` pairs: ``sum w f(theta + offset)``."""

    kind: str
    shifts: tuple[tuple[float, float], ...]
    r: float

    def apply(self, f, theta: float) -> float:
        return float(sum(w * f(theta + o) for o, w in self.shifts))

    @property
    def offsets(self) -> tuple[float, ...]:
        return tuple(o for o, _ in self.shifts)

    @property
    def weights(self) -> tuple[float, ...]:
        return tuple(w for _, w in self.shifts)


def rule_spec(kind: str, r: float, step: float | None = None, gamma2: float | None = None) -> GradientRuleSpec:
    """Shift/weight list for ``kind``.

    ``step`` is ``h`` for the finite-difference rules, ``gamma`` for cPSR and
    ``gamma1`` for gPSR (which also needs ``gamma2``).
    """
    r = float(r)
    if kind == "gPSR":
        if step is None or gamma2 is None:
            raise ValueError("gPSR needs both gamma1 (step) and gamma2")
        shifts = ((step, r), (-gamma2, -r))
    elif kind == "cPSR":
        g = default_step(kind, r) if step is None else step
        w = r / _check_shift(r, g)
        shifts = ((g, w), (-g, -w))
    elif kind in FD_KINDS:
        h = default_step(kind, r) if step is None else step
        _check_step(h)
        shifts = {
            "cFD": ((h, 1 / (2 * h)), (-h, -1 / (2 * h))),
            "bFD": ((0.0, 1 / h), (-h, -1 / h)),
            "fFD": ((h, 1 / h), (0.0, -1 / h)),
        }[kind]
    elif kind == "second-derivative":
        shifts = ((np.pi / (2 * r), 2 * r * r), (0.0, -2 * r * r))
    else:
        raise ValueError(f"unknown rule kind {kind!r}; expected one of {RULE_KINDS}")
    return GradientRuleSpec(kind, tuple((float(o), float(w)) for o, w in shifts), r)


@dataclass(frozen=True)
class RuleDecomposition:
    a: float
    b: float

    def combine(self, d1: float, d2: float) -> float:
        return self.a * d1 + self.b * d2


def decompose(gamma1: float, gamma2: float, r: float) -> RuleDecomposition:
    a = (np.sin(2 * r * gamma1) + np.sin(2 * r * gamma2)) / 2
    b = -(np.cos(2 * r * gamma1) - np.cos(2 * r * gamma2)) / (4 * r)
    return RuleDecomposition(float(a), float(b))


def g_gpsr(f, theta: float, gamma1: float, gamma2: float) -> float:
    return f.r * (f(theta + gamma1) - f(theta - gamma2))


def g_cpsr(f, theta: float, gamma: float | None = None) -> float:
    r = f.r
    if gamma is None:
        gamma = np.pi / (4 * r)
    s = _check_shift(r, gamma)
    return r * (f(theta + gamma) - f(theta - gamma)) / s


def g_cfd(f, theta: float, h: float) -> float:
    _check_step(h)
    return (f(theta + h) - f(theta - h)) / (2 * h)


def g_bfd(f, theta: float, h: float) -> float:
    _check_step(h)
    return (f(theta) - f(theta - h)) / h


def g_ffd(f, theta: float, h: float) -> float:
    _check_step(h)
    return (f(theta + h) - f(theta)) / h


def second_derivative(f, theta: float) -> float:
    r = f.r
    return 2 * r * g_gpsr(f, theta, np.pi / (2 * r), 0.0)


def second_derivative_literal(f, theta: float) -> float:
    """Same combination with a bare factor 2 instead of 2r; exact only when r = 1."""
    return 2 * g_gpsr(f, theta, np.pi / (2 * f.r), 0.0)


def higher_derivative(f, theta: float, n: int, gamma: float | None = None) -> float:
    """n-th derivative from one first- or second-derivative rule.

    Uses ``f^(n+2) = -(2r)^2 f^(n)`` for ``n >= 1``.
    """
    if n < 1:
        raise ValueError("order must be >= 1; evaluate the function itself for n = 0")
    k = -((2 * f.r) ** 2)
    if n % 2:
        return k ** ((n - 1) // 2) * g_cpsr(f, theta, gamma)
    return k ** ((n - 2) // 2) * second_derivative(f, theta)


def rule_value(kind: str, f, theta: float, step: float | None = None) -> float:
    """Exact (expectation-level) output of a derivative estimator."""
    if step is None and kind in ("cPSR", *FD_KINDS):
        step = default_step(kind, f.r)
    if kind == "cPSR":
        return g_cpsr(f, theta, step)
    if kind == "cFD":
        return g_cfd(f, theta, step)
    if kind == "bFD":
        return g_bfd(f, theta, step)
    if kind == "fFD":
        return g_ffd(f, theta, step)
    if kind == "second-derivative":
        return second_derivative(f, theta)
    raise ValueError(f"rule {kind!r} is not a derivative estimator")


def _oracle(f) -> TrigPoly:
    return f if isinstance(f, TrigPoly) else fit(f)


def bias_closed_form(kind: str, f, theta: float, h: float) -> float:
    """Expected estimator value minus the true first derivative.

    Uses oracle values of f' and f''. Backward and forward differences carry an
    extra f'' term of opposite sign.
    """
    if kind == "cPSR":
        _check_shift(f.r, h)
        return 0.0
    if kind not in FD_KINDS:
        raise ValueError(f"no bias formula for rule {kind!r}")
    _check_step(h)
    p = _oracle(f)
    r = p.r
    d1 = nth_derivative_at(p, 1, theta)
    bias = (np.sin(2 * r * h) / (2 * r * h) - 1) * d1
    if kind == "cFD":
        return float(bias)
    d2 = nth_derivative_at(p, 2, theta)
    curv = (1 - np.cos(2 * r * h)) / (4 * r * r * h) * d2
    return float(bias - curv if kind == "bFD" else bias + curv)


def alt_bias_closed_form(kind: str, f, theta: float, h: float) -> float:
    """One-sided bias with the alternative coefficients ``sin(2rh)/(2h)`` and ``(cos(2rh)-1)/(4rh)``.

    Kept only for side-by-side reporting; agrees with :func:`bias_closed_form`
    for backward differences at r = 1.
    """
    if kind == "cFD":
        return bias_closed_form(kind, f, theta, h)
    if kind not in ("bFD", "fFD"):
        raise ValueError(f"no alternative bias formula for rule {kind!r}")
    _check_step(h)
    p = _oracle(f)
    r = p.r
    d1 = nth_derivative_at(p, 1, theta)
    d2 = nth_derivative_at(p, 2, theta)
    return float((np.sin(2 * r * h) / (2 * h) - 1) * d1 + (np.cos(2 * r * h) - 1) / (4 * r * h) * d2)


def deterministic_bias(kind: str, f, theta: float, h: float) -> float:
    p = _oracle(f)
    return rule_value(kind, f, theta, h) - nth_derivative_at(p, 1, theta)


def variance_closed_form(kind: str, f, theta: float, step: float | None = None, shots: int = 1) -> float:
    """Variance of the estimator when each evaluation uses ``shots`` shots.

    ``sum_k w_k^2 sigma_1^2(theta + o_k) / shots`` over the rule's shift list.
    """
    if shots < 1:
        raise ValueError("shots must be >= 1")
    spec = rule_spec(kind, f.r, step)
    return float(sum(w * w * f.one_shot_variance(theta + o) for o, w in spec.shifts) / shots)


def alt_variance_closed_form(kind: str, f, theta: float, h: float, shots: int = 1) -> float:
    """Finite-difference variance with a ``4 h^2`` denominator for all three quotients.

    Matches :func:`variance_closed_form` for cFD only; reported for comparison.
    """
    _check_step(h)
    s = f.one_shot_variance
    pts = {"cFD": (h, -h), "bFD": (0.0, -h), "fFD": (h, 0.0)}[kind]
    return float(sum(s(theta + o) for o in pts) / (4 * h * h) / shots)


def single_shot_samples(rule: GradientRuleSpec, f, theta: float, n: int, seed: int) -> np.ndarray:
    """``n`` i.i.d. draws of the rule with every evaluation replaced by one shot."""
    out = np.zeros(n)
    for k, (o, w) in enumerate(rule.shifts):
        out += w * f.sample_shots(theta + o, n, seed, stream=k)
    return out


def estimate(
    rule: GradientRuleSpec,
    circuit: ParameterizedCircuit,
    theta,
    i: int,
    shots_per_eval: int,
    seed: int,
) -> EstimatorResult:
    """Shot estimate of the rule; each shift point gets ``shots_per_eval`` shots.

    ``sample_variance`` is the plug-in per-shot variance ``sum w_k^2 s_k^2``,
    so the variance of ``mean`` is ``sample_variance / shots``.
    """
    f = restrict(circuit, theta, i)
    t = f.base_value
    mean = 0.0
    var = 0.0
    for k, (o, w) in enumerate(rule.shifts):
        res = sample_n_shots(circuit, f.theta_at(t + o), shots_per_eval, seed, stream=k)
        mean += w * res.mean
        var += w * w * res.sample_variance
    return EstimatorResult(float(mean), float(var), shots_per_eval, int(seed))


class Gradient(NamedTuple):
    values: np.ndarray
    evaluations: int


def evaluations_per_gradient(kind: str, n_params: int) -> int:
    if kind in ("cPSR", "cFD"):
        return 2 * n_params
    if kind in ("bFD", "fFD", "second-derivative"):
        return n_params + 1
    raise ValueError(f"unknown rule kind {kind!r}")


def full_gradient(
    kind: str,
    circuit: ParameterizedCircuit,
    theta,
    mode: str = "exact",
    step: float | None = None,
    shots: int | None = None,
    seed: int = 0,
) -> Gradient:
    """Apply a single-component rule to every parameter.

    Shift points that coincide with ``theta`` (one-sided rules) are evaluated
    once and shared, so the evaluation count is ``2n`` for centered rules and
    ``n + 1`` for one-sided ones. ``mode="shots"`` replaces each evaluation by
    a ``shots``-shot mean, with point ``j`` drawing from stream ``j``.
    """
    theta = circuit._theta(theta)
    if mode not in ("exact", "shots"):
        raise ValueError(f"mode must be 'exact' or 'shots', got {mode!r}")
    if mode == "shots" and (shots is None or shots < 1):
        raise ValueError("shot mode needs shots >= 1")
    points: dict = {}
    terms = []
    for i in range(circuit.n_params):
        r = circuit.gates_for(i)[0].r
        spec = rule_spec(kind, r, step)
        comp = []
        for o, w in spec.shifts:
            key = None if o == 0.0 else (i, o)
            if key not in points:
                pt = theta.copy()
                pt[i] += o
                points[key] = pt
            comp.append((key, w))
        terms.append(comp)
    values = {}
    for j, (key, pt) in enumerate(points.items()):
        if mode == "exact":
            values[key] = evaluate(circuit, pt)
        else:
            values[key] = sample_n_shots(circuit, pt, shots, seed, stream=j).mean
    grad = np.array([sum(w * values[key] for key, w in comp) for comp in terms])
    return Gradient(grad, len(points))
