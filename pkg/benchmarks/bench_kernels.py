"""Time the numba kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Both backends are imported directly so the env flag is irrelevant here.
The first numba call (compile or cache load) is excluded.
"""
import argparse
import timeit

import numpy as np

from gradshift._kernels import _numba, _numpy
from gradshift.ensemble import random_circuit
from gradshift.rgates import gate_array


def _cases(rng):
    for q in (1, 2, 4, 6):
        c = random_circuit(rng, q, 6, n_fixed=6)
        theta = rng.uniform(-np.pi, np.pi, 6)
        mats = np.ascontiguousarray(c.matrices(theta))
        state = c.initial_state.amplitudes
        obs = c.observable.matrix
        final = _numpy.apply_chain(state, mats)
        labels = np.arange(1 << q) % 3
        cdf = np.cumsum(np.full(8, 1 / 8))
        cdf[-1] = 1.0
        u = rng.random(100_000)
        yield q, {
            "apply_chain": ((state, mats), {}),
            "quadratic_form": ((final, obs), {}),
            "group_probabilities": ((final, labels, 3), {}),
            "inverse_cdf": ((cdf, np.linspace(-1, 1, 8), u), {}),
        }


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--number", type=int, default=200)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    print(f"{'kernel':<20} {'qubits':>6} {'numpy us':>10} {'numba us':>10} {'speedup':>8}")
    for q, cases in _cases(rng):
        for name, (a, kw) in cases.items():
            fn_np, fn_nb = getattr(_numpy, name), getattr(_numba, name)
            np.testing.assert_allclose(fn_np(*a, **kw), fn_nb(*a, **kw), rtol=1e-12, atol=1e-14)
            t_np = min(timeit.repeat(lambda: fn_np(*a, **kw), number=args.number, repeat=args.repeat))
            t_nb = min(timeit.repeat(lambda: fn_nb(*a, **kw), number=args.number, repeat=args.repeat))
            us_np, us_nb = 1e6 * t_np / args.number, 1e6 * t_nb / args.number
            print(f"{name:<20} {q:>6} {us_np:>10.2f} {us_nb:>10.2f} {us_np / us_nb:>7.2f}x")


if __name__ == "__main__":
    main()
