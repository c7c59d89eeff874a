"""Markdown verification report comparing alternative closed forms against measured values."""
from __future__ import annotations

import io

import numpy as np

from . import gradrules as gr
from .costfn import restrict
from .ensemble import random_circuit, random_ensemble
from .multiparam import SHIFT_READINGS, TwoParamFunction, check_discussion_identity
from .nogo import build_default, verify
from .oracle import fit, nth_derivative_at


def _table(out, header, rows):
    out.write("| " + " | ".join(header) + " |\n")
    out.write("|" + "---|" * len(header) + "\n")
    for row in rows:
        out.write("| " + " | ".join(f"{v:.6g}" if isinstance(v, float) else str(v) for v in row) + " |\n")
    out.write("\n")


def second_derivative_rows(ensemble):
    rows = []
    for c, theta in ensemble:
        f = restrict(c, theta, 0)
        t = theta[0]
        exact = nth_derivative_at(fit(f), 2, t)
        lit = gr.second_derivative_literal(f, t)
        scaled = gr.second_derivative(f, t)
        rows.append((f.r, exact, scaled, lit, lit / scaled if abs(scaled) > 1e-12 else float("nan")))
    return rows


def recurrence_rows(ensemble):
    rows = []
    for c, theta in ensemble:
        f = restrict(c, theta, 0)
        p = fit(f)
        t = theta[0]
        d1, d3 = nth_derivative_at(p, 1, t), nth_derivative_at(p, 3, t)
        rows.append((f.r, d3, -(2 * f.r) ** 2 * d1, -d1 / (4 * f.r**2)))
    return rows


def one_sided_rows(ensemble, shots, seed):
    rows = []
    for k, (c, theta) in enumerate(ensemble):
        f = restrict(c, theta, 0)
        t = theta[0]
        h = 0.2 / f.r
        for kind in ("cFD", "bFD", "fFD"):
            det = gr.deterministic_bias(kind, f, t, h)
            ours = gr.bias_closed_form(kind, f, t, h)
            alt = gr.alt_bias_closed_form(kind, f, t, h)
            var_w = gr.variance_closed_form(kind, f, t, h)
            var_p = gr.alt_variance_closed_form(kind, f, t, h)
            samples = gr.single_shot_samples(gr.rule_spec(kind, f.r, h), f, t, shots, seed + k)
            emp = float(np.var(samples, ddof=1))
            rows.append((kind, f.r, det, ours, alt, emp, var_w, var_p, emp / var_p))
    return rows


def identity_rows(seed, count=20):
    rng = np.random.default_rng(seed)
    rows = []
    for k in range(count):
        q = int(rng.integers(2, 4))
        r = float(rng.choice((0.5, 1.0, 1.3)))
        c = random_circuit(rng, q, 2, shared_r=r)
        base = rng.uniform(-np.pi, np.pi, 2)
        g1, g2 = rng.uniform(-np.pi / r, np.pi / r, 2)
        f2 = TwoParamFunction(c, 0, 1, base)
        for reading in SHIFT_READINGS:
            rep = check_discussion_identity(f2, base[0], base[1], g1, g2, reading)
            rows.append((k, reading, r, rep.lhs, rep.rhs, rep.residual))
    return rows


def build_report(seed: int = 0, shots: int = 100_000) -> str:
    out = io.StringIO()
    ensemble = random_ensemble(seed, 8)
    out.write(f"# gradshift verification report (seed {seed})\n\n")

    out.write("## Second derivative: factor 2r versus bare factor 2\n\n")
    out.write("The bare-2 value differs from the exact one by the factor 1/r.\n\n")
    _table(out, ["r", "oracle f''", "2r*gPSR", "2*gPSR", "ratio 2/(2r)"], second_derivative_rows(ensemble))

    out.write("## Derivative recurrence\n\n")
    out.write("f''' against -(2r)^2 f' and against the alternative -(1/(4r^2)) f'.\n\n")
    _table(out, ["r", "f'''", "-(2r)^2 f'", "-(1/4r^2) f'"], recurrence_rows(ensemble))

    out.write(f"## Finite-difference bias and variance (h = 0.2/r, {shots} shots)\n\n")
    _table(out, ["rule", "r", "measured bias", "closed form", "alt form", "MC variance",
                 "weight variance", "alt /(4h^2)", "MC / alt"],
           one_sided_rows(ensemble[:4], shots, seed))

    pair = build_default()
    rep = verify(pair)
    out.write("## No-go counterexample (zeta = 0.3, gamma = 0.7)\n\n")
    out.write(f"- value gaps: {rep.value_gap_at_zeta:.3e}, {rep.value_gap_at_zeta_plus_gamma:.3e}\n")
    out.write(f"- derivative gap: {rep.derivative_gap:.15f}\n")
    out.write(f"- projector correction added to A: {pair.correction:+.15f}\n\n")

    out.write("## Three-point Hessian combination residuals\n\n")
    _table(out, ["circuit", "reading", "r", "lhs", "rhs", "residual"], identity_rows(seed))
    return out.getvalue()
