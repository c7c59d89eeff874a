from __future__ import annotations

import numpy as np


def apply_chain(state: np.ndarray, mats: np.ndarray) -> np.ndarray:
    out = state
    for m in mats:
        out = m @ out
    return out


def quadratic_form(state: np.ndarray, op: np.ndarray) -> complex:
    return complex(np.vdot(state, op @ state))


def group_probabilities(amps: np.ndarray, labels: np.ndarray, n_groups: int) -> np.ndarray:
    return np.bincount(labels, weights=amps.real * amps.real + amps.imag * amps.imag, minlength=n_groups)


def inverse_cdf(cdf: np.ndarray, values: np.ndarray, u: np.ndarray) -> np.ndarray:
    idx = np.searchsorted(cdf, u, side="right")
    np.minimum(idx, len(values) - 1, out=idx)
    return values[idx]
