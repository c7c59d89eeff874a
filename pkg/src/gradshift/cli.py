"""``gradshift`` command line: batch verification runs that emit CSV/JSON.

Exit codes: 0 success, 1 verification failure, 2 usage or config error.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from . import gradrules as gr
from .circuit_io import CircuitSpecError, bundled_path, load_circuit
from .costfn import evaluate, restrict
from .ensemble import random_ensemble
from .errors import ConditionViolation, GradshiftError, SingularShift, ZeroStep
from .multiparam import SHIFT_READINGS, TwoParamFunction, check_discussion_identity, hessian_2x2, hessian_fd
from .nogo import build_custom, verify
from .oracle import fit, nth_derivative_at
from .rgates import gate_array, make_r_gate
from .statevector import HermitianOperator, StateVector, pauli_string

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

GRADCHECK_TOL = 1e-9
BIAS_TOL = 1e-12
VARIANCE_RTOL = 0.05
HESSIAN_FD_TOL = 1e-5
HESSIAN_SYM_TOL = 1e-9


class ConfigError(Exception):
    pass


# -- helpers -----------------------------------------------------------------

def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return int(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return "%.17g" % v
    return v


class _Table:
    def __init__(self, columns):
        self.columns = list(columns)
        self.rows = []

    def add(self, **row):
        self.rows.append([_fmt(row.get(c, "")) for c in self.columns])

    def write(self, path):
        if path is None or str(path) == "-":
            self._dump(sys.stdout)
            return
        Path(path).parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            self._dump(fh)

    def _dump(self, fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(self.columns)
        w.writerows(self.rows)


def _load_config(args, required=True) -> tuple[dict, Path]:
    if args.config is None:
        if required:
            raise ConfigError("--config is required for this command")
        return {}, Path.cwd()
    path = Path(args.config)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg, path.parent


def _resolve(ref: str, base: Path) -> Path:
    if ref.startswith("bundled:"):
        return bundled_path(ref.split(":", 1)[1])
    p = Path(ref)
    return p if p.is_absolute() else base / p


def _circuit(ref: str, base: Path):
    path = _resolve(ref, base)
    if not path.is_file():
        raise ConfigError(f"circuit file not found: {path}")
    try:
        return load_circuit(path)
    except (CircuitSpecError, json.JSONDecodeError, GradshiftError, ValueError) as exc:
        raise ConfigError(f"bad circuit spec {path}: {exc}") from exc


def _seed(args, cfg) -> int:
    if args.seed is not None:
        return args.seed
    if "seed" in cfg:
        return int(cfg["seed"])
    return int(os.environ.get("GRADSHIFT_SEED", "0"))


def _shots(args, cfg, default: int) -> int:
    shots = args.shots if args.shots is not None else int(cfg.get("shots", default))
    if shots < 0:
        raise ConfigError("shots must be >= 0")
    return shots


def _grid(cfg, key, default=None, allow_zero=True) -> list[float]:
    vals = cfg.get(key, default)
    if vals is None:
        raise ConfigError(f"config is missing {key!r}")
    if isinstance(vals, (int, float)):
        vals = [vals]
    vals = [float(v) for v in vals]
    if not vals:
        raise ConfigError(f"grid {key!r} is empty")
    if not allow_zero and any(abs(v) <= 1e-12 for v in vals):
        raise ConfigError(f"grid {key!r} contains a zero step")
    return vals


def _base_point(cfg, circuit) -> np.ndarray:
    base = cfg.get("base_point", cfg.get("theta", 0.0))
    base = np.broadcast_to(np.asarray(base, dtype=float), (circuit.n_params,)).copy()
    return base


def _out(args, cfg):
    return args.out if args.out is not None else cfg.get("out")


# -- commands ----------------------------------------------------------------

GRADCHECK_COLUMNS = ["circuit_id", "theta", "gamma1", "gamma2", "g_gpsr", "a", "b", "oracle_f1", "oracle_f2", "residual"]


def _gradcheck_rows(table, circuit_id, f, thetas, gammas, corrupt):
    worst = 0.0
    p = fit(f)
    for t in thetas:
        d1 = nth_derivative_at(p, 1, t)
        d2 = nth_derivative_at(p, 2, t)
        for g1, g2 in gammas:
            g = gr.g_gpsr(f, t, g1, g2)
            if corrupt:
                g *= 1.01
            dec = gr.decompose(g1, g2, f.r)
            res = abs(g - dec.combine(d1, d2))
            worst = max(worst, res)
            table.add(circuit_id=circuit_id, theta=t, gamma1=g1, gamma2=g2, g_gpsr=g,
                      a=dec.a, b=dec.b, oracle_f1=d1, oracle_f2=d2, residual=res)
    return worst


def cmd_gradcheck(args) -> int:
    cfg, base = _load_config(args)
    seed = _seed(args, cfg)
    tol = float(cfg.get("tolerance", GRADCHECK_TOL))
    corrupt = bool(cfg.get("corrupt_rule", False))
    table = _Table(GRADCHECK_COLUMNS)
    refs = cfg.get("circuits", [cfg["circuit"]] if "circuit" in cfg else [])
    random_cfg = cfg.get("random")
    if not refs and not random_cfg:
        raise ConfigError("gradcheck needs 'circuit', 'circuits' or 'random'")
    worst = 0.0
    for ref in refs:
        c = _circuit(ref, base)
        thetas = _grid(cfg, "thetas", [0.0])
        gammas = list(zip(_grid(cfg, "gammas1", [np.pi / 2]), _grid(cfg, "gammas2", [np.pi / 2])))
        point = _base_point(cfg, c)
        for i in range(c.n_params):
            f = restrict(c, point, i)
            worst = max(worst, _gradcheck_rows(table, f"{Path(ref).name}:{i}", f, thetas, gammas, corrupt))
    if random_cfg:
        rseed = int(random_cfg.get("seed", seed))
        rng = np.random.default_rng([rseed, 1])
        ens = random_ensemble(rseed, int(random_cfg.get("count", 200)), tuple(random_cfg.get("qubits", (1, 4))))
        n_points = int(random_cfg.get("points", 1))
        for k, (c, theta) in enumerate(ens):
            f = restrict(c, theta, 0)
            span = np.pi / f.r
            thetas = rng.uniform(-np.pi, np.pi, n_points)
            gammas = list(zip(rng.uniform(-span, span, n_points), rng.uniform(-span, span, n_points)))
            worst = max(worst, _gradcheck_rows(table, f"random-{k}:0", f, thetas, gammas, corrupt))
    table.write(_out(args, cfg))
    ok = worst < tol
    print(f"gradcheck: {len(table.rows)} rows, max residual {worst:.3e} ({'PASS' if ok else 'FAIL'} at {tol:g})",
          file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL


SWEEP_COLUMNS = ["rule", "h", "closed_form_bias", "deterministic_bias", "closed_form_variance",
                 "empirical_variance", "shots", "alt_closed_form_bias", "alt_closed_form_variance"]


def _sweep(args, default_shots: int, check_variance: bool) -> int:
    cfg, base = _load_config(args)
    seed = _seed(args, cfg)
    shots = _shots(args, cfg, default_shots)
    c = _circuit(cfg.get("circuit", ""), base)
    i = int(cfg.get("component", 0))
    point = _base_point(cfg, c)
    try:
        f = restrict(c, point, i)
    except (IndexError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    rules = cfg.get("rules", list(gr.FD_KINDS))
    bad = [r for r in rules if r not in gr.ESTIMATOR_KINDS]
    if bad:
        raise ConfigError(f"unknown rules {bad}; expected {gr.ESTIMATOR_KINDS}")
    steps = _grid(cfg, "steps", cfg.get("h"), allow_zero=False)
    t = f.base_value
    p = fit(f)
    table = _Table(SWEEP_COLUMNS)
    failures = []
    for k, rule in enumerate(rules):
        for h in steps:
            try:
                spec = gr.rule_spec(rule, f.r, h)
            except (SingularShift, ZeroStep) as exc:
                raise ConfigError(str(exc)) from exc
            cf_bias = gr.bias_closed_form(rule, p, t, h)
            det_bias = gr.deterministic_bias(rule, f, t, h)
            cf_var = gr.variance_closed_form(rule, f, t, h)
            row = dict(rule=rule, h=h, closed_form_bias=cf_bias, deterministic_bias=det_bias,
                       closed_form_variance=cf_var, shots=shots)
            if rule in gr.FD_KINDS:
                row["alt_closed_form_bias"] = gr.alt_bias_closed_form(rule, p, t, h)
                row["alt_closed_form_variance"] = gr.alt_variance_closed_form(rule, f, t, h)
            if abs(cf_bias - det_bias) > BIAS_TOL * max(1.0, abs(nth_derivative_at(p, 1, t))):
                failures.append(f"{rule} h={h}: bias mismatch {abs(cf_bias - det_bias):.3e}")
            if shots:
                samples = gr.single_shot_samples(spec, f, t, shots, seed + k)
                emp = float(np.var(samples, ddof=1)) if shots > 1 else 0.0
                row["empirical_variance"] = emp
                if check_variance and cf_var > 1e-12 and abs(emp - cf_var) > VARIANCE_RTOL * cf_var:
                    failures.append(f"{rule} h={h}: variance {emp:.6g} vs closed form {cf_var:.6g}")
            table.add(**row)
    table.write(_out(args, cfg))
    for msg in failures:
        print(f"FAIL {msg}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_bias_sweep(args) -> int:
    return _sweep(args, default_shots=0, check_variance=False)


def cmd_variance_sweep(args) -> int:
    return _sweep(args, default_shots=100_000, check_variance=True)


def _parse_operator(spec) -> HermitianOperator:
    """``"X"``, ``"0.5*ZZ,1*XI"`` or a ``[[coeff, label], ...]`` list."""
    if isinstance(spec, str):
        terms = []
        for part in spec.split(","):
            coeff, _, label = part.strip().rpartition("*")
            terms.append((float(coeff) if coeff else 1.0, label.strip()))
    else:
        terms = [(float(c), str(p)) for c, p in spec]
    try:
        return HermitianOperator(sum(c * pauli_string(p).matrix for c, p in terms))
    except (GradshiftError, ValueError, KeyError) as exc:
        raise ConfigError(f"bad operator {spec!r}: {exc}") from exc


def cmd_nogo(args) -> int:
    cfg, _ = _load_config(args, required=False)
    zeta = args.zeta if args.zeta is not None else float(cfg.get("zeta", 0.3))
    gamma = args.gamma if args.gamma is not None else float(cfg.get("gamma", 0.7))
    G = _parse_operator(args.generator or cfg.get("generator", "X"))
    F = _parse_operator(args.second_generator or cfg.get("second_generator", "0.7071067811865476*Y,0.7071067811865476*Z"))
    A = _parse_operator(args.observable or cfg.get("observable", "Y"))
    if not (G.dim == F.dim == A.dim):
        raise ConfigError("generator, second generator and observable must act on the same qubits")
    zero = StateVector.zero(G.q)
    try:
        gG = make_r_gate(G)
        if not 0 < gamma < np.pi / gG.r:
            raise ConfigError(f"gamma must lie in (0, pi/r) = (0, {np.pi / gG.r:.6g}); got {gamma}")
        psi = StateVector(gate_array(gG, -zeta) @ zero.amplitudes)
        pair = build_custom(gG, F, A, psi, zeta, gamma)
    except ConditionViolation as exc:
        raise ConfigError(f"genericity condition failed ({exc})") from exc
    except (GradshiftError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    rep = verify(pair)
    ok = (rep.value_gap_at_zeta < 1e-10 and rep.value_gap_at_zeta_plus_gamma < 1e-10
          and rep.derivative_gap > 1e-6 and rep.derivative_agreement < 1e-9)
    print(f"zeta = {zeta:.17g}, gamma = {gamma:.17g}, r = {pair.f.r:.17g}")
    print(f"|f(zeta) - f~(zeta)|             = {rep.value_gap_at_zeta:.3e}")
    print(f"|f(zeta+gamma) - f~(zeta+gamma)| = {rep.value_gap_at_zeta_plus_gamma:.3e}")
    print(f"f'(zeta) = {rep.f_prime_commutator:.12f}   f~'(zeta) = {rep.f_tilde_prime_commutator:.12f}")
    print(f"derivative gap                   = {rep.derivative_gap:.12f}")
    print(f"commutator vs oracle derivatives = {rep.derivative_agreement:.3e}")
    print("PASS" if ok else "FAIL")
    out = _out(args, cfg)
    if out:
        def cplx(v):
            return [[float(x.real), float(x.imag)] for x in np.ravel(v)]
        data = {
            "zeta": zeta, "gamma": gamma, "r": pair.f.r,
            "c_perp_norm": pair.c_perp_norm,
            "commutator_expectation": [pair.commutator_expectation.real, pair.commutator_expectation.imag],
            "correction": pair.correction,
            "generator": cplx(pair.f.circuit.gates_for(0)[0].generator.matrix),
            "second_generator": cplx(pair.f_tilde.circuit.gates_for(0)[0].generator.matrix),
            "observable": cplx(pair.f.circuit.observable.matrix),
            "observable_tilde": cplx(pair.B.matrix),
            "psi": cplx(pair.f.circuit.initial_state.amplitudes),
            "zeta_state": cplx(pair.zeta_state.amplitudes),
            "zeta_perp": cplx(pair.zeta_perp),
            "report": {
                "value_gap_at_zeta": rep.value_gap_at_zeta,
                "value_gap_at_zeta_plus_gamma": rep.value_gap_at_zeta_plus_gamma,
                "derivative_gap": rep.derivative_gap,
                "f_prime_commutator": rep.f_prime_commutator,
                "f_tilde_prime_commutator": rep.f_tilde_prime_commutator,
                "f_prime_oracle": rep.f_prime_oracle,
                "f_tilde_prime_oracle": rep.f_tilde_prime_oracle,
            },
            "pass": ok,
        }
        Path(out).parent.mkdir(parents=True, exist_ok=True)
        with open(out, "w") as fh:
            json.dump(data, fh, indent=2)
    return EXIT_OK if ok else EXIT_FAIL


def cmd_optimize(args) -> int:
    cfg, base = _load_config(args)
    c = _circuit(cfg.get("circuit", ""), base)
    seed = _seed(args, cfg)
    shots = _shots(args, cfg, 0)
    rule = cfg.get("rule", "cPSR")
    if rule not in gr.ESTIMATOR_KINDS:
        raise ConfigError(f"rule must be one of {gr.ESTIMATOR_KINDS}")
    lr = float(cfg.get("step_size", 0.1))
    iterations = int(cfg.get("iterations", 200))
    if iterations < 1:
        raise ConfigError("iterations must be >= 1")
    step = cfg.get("h", cfg.get("gamma"))
    theta = np.broadcast_to(np.asarray(cfg.get("theta0", 0.0), dtype=float), (c.n_params,)).copy()
    table = _Table(["iter", "F_exact", "grad_norm", "total_circuit_evals"])
    total = 0
    mode = "shots" if shots else "exact"
    try:
        for it in range(iterations):
            grad = gr.full_gradient(rule, c, theta, mode=mode, step=step, shots=shots or None,
                                    seed=seed + it)
            total += grad.evaluations
            table.add(iter=it, F_exact=evaluate(c, theta), grad_norm=float(np.linalg.norm(grad.values)),
                      total_circuit_evals=total)
            theta = theta - lr * grad.values
    except (SingularShift, ZeroStep) as exc:
        raise ConfigError(str(exc)) from exc
    table.add(iter=iterations, F_exact=evaluate(c, theta), grad_norm="", total_circuit_evals=total)
    table.write(_out(args, cfg))
    target = cfg.get("target")
    if target is not None and evaluate(c, theta) > float(target):
        print(f"FAIL: final F = {evaluate(c, theta):.17g} above target {target}", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


HESSIAN_COLUMNS = ["t1", "t2", "h11", "h12", "h21", "h22", "fd_h11", "fd_h12", "fd_h22",
                   "fd_max_deviation", "symmetry_deviation"]
IDENTITY_COLUMNS = ["reading", "t1", "t2", "gamma1", "gamma2", "r", "lhs", "rhs", "residual"]


def cmd_hessian(args) -> int:
    cfg, base = _load_config(args)
    c = _circuit(cfg.get("circuit", ""), base)
    i, j = (int(v) for v in cfg.get("indices", (0, 1)))
    point = _base_point(cfg, c)
    try:
        f2 = TwoParamFunction(c, i, j, point)
    except (IndexError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    pts = cfg.get("points", [[point[i], point[j]]])
    gammas = cfg.get("gammas", [[0.3, 0.5]])
    fd_step = float(cfg.get("fd_step", 1e-3))
    reading = args.shift_reading or cfg.get("shift_reading", "both")
    readings = SHIFT_READINGS if reading == "both" else (reading,)
    htab = _Table(HESSIAN_COLUMNS)
    itab = _Table(IDENTITY_COLUMNS)
    failures = []
    shared_r = math.isclose(f2.r_i, f2.r_j, abs_tol=1e-12)
    for t1, t2 in pts:
        H = hessian_2x2(f2, t1, t2)
        Hfd = hessian_fd(f2, t1, t2, fd_step)
        dev = float(np.max(np.abs(H - Hfd)))
        sym = abs(H[0, 1] - H[1, 0])
        if dev > HESSIAN_FD_TOL or sym > HESSIAN_SYM_TOL:
            failures.append(f"t=({t1}, {t2}): fd deviation {dev:.3e}, asymmetry {sym:.3e}")
        htab.add(t1=t1, t2=t2, h11=H[0, 0], h12=H[0, 1], h21=H[1, 0], h22=H[1, 1],
                 fd_h11=Hfd[0, 0], fd_h12=Hfd[0, 1], fd_h22=Hfd[1, 1],
                 fd_max_deviation=dev, symmetry_deviation=sym)
        if not shared_r:
            continue
        for g1, g2 in gammas:
            for rd in readings:
                rep = check_discussion_identity(f2, t1, t2, g1, g2, rd)
                itab.add(reading=rd, t1=t1, t2=t2, gamma1=g1, gamma2=g2, r=rep.r,
                         lhs=rep.lhs, rhs=rep.rhs, residual=rep.residual)
    out = _out(args, cfg)
    htab.write(out)
    if shared_r:
        ipath = None if out in (None, "-") else str(Path(out).with_suffix("")) + ".identity.csv"
        itab.write(ipath)
    else:
        print("identity report skipped: the two gates have different r", file=sys.stderr)
    for msg in failures:
        print(f"FAIL {msg}", file=sys.stderr)
    return EXIT_FAIL if failures else EXIT_OK


def cmd_report(args) -> int:
    from .report import build_report

    cfg, _ = _load_config(args, required=False)
    text = build_report(seed=_seed(args, cfg), shots=_shots(args, cfg, 100_000))
    out = _out(args, cfg)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {
    "gradcheck": cmd_gradcheck,
    "bias-sweep": cmd_bias_sweep,
    "variance-sweep": cmd_variance_sweep,
    "nogo": cmd_nogo,
    "optimize": cmd_optimize,
    "hessian": cmd_hessian,
    "report": cmd_report,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="gradshift", description=__doc__.splitlines()[0])
    p.add_argument("command", choices=list(COMMANDS))
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--seed", type=int, help="RNG seed (default: config, then $GRADSHIFT_SEED, then 0)")
    p.add_argument("--shots", type=int)
    p.add_argument("--out", help="output path ('-' for stdout)")
    p.add_argument("--shift-reading", choices=["literal", "scaled", "both"])
    nogo = p.add_argument_group("nogo")
    nogo.add_argument("--zeta", type=float)
    nogo.add_argument("--gamma", type=float)
    nogo.add_argument("--generator", help="e.g. 'X' or '0.5*ZZ,0.5*XI'")
    nogo.add_argument("--second-generator")
    nogo.add_argument("--observable")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"gradshift {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
