from __future__ import annotations

import numba as nb
import numpy as np

njit_kwargs = {"nogil": True, "cache": True}


@nb.njit(**njit_kwargs)
def apply_chain(state, mats):
    d = state.shape[0]
    out = state.copy()
    tmp = np.empty(d, dtype=np.complex128)
    for k in range(mats.shape[0]):
        for i in range(d):
            acc = 0j
            for j in range(d):
                acc += mats[k, i, j] * out[j]
            tmp[i] = acc
        out[:] = tmp
    return out


@nb.njit(**njit_kwargs)
def quadratic_form(state, op):
    d = state.shape[0]
    acc = 0j
    for i in range(d):
        row = 0j
        for j in range(d):
            row += op[i, j] * state[j]
        acc += np.conj(state[i]) * row
    return acc


@nb.njit(**njit_kwargs)
def group_probabilities(amps, labels, n_groups):
    p = np.zeros(n_groups)
    for i in range(amps.shape[0]):
        a = amps[i]
        p[labels[i]] += a.real * a.real + a.imag * a.imag
    return p


@nb.njit(**njit_kwargs)
def inverse_cdf(cdf, values, u):
    m = cdf.shape[0]
    out = np.empty(u.shape[0])
    for s in range(u.shape[0]):
        x = u[s]
        # first k with x < cdf[k]
        lo = 0
        hi = m
        while lo < hi:
            mid = (lo + hi) >> 1
            if cdf[mid] <= x:
                lo = mid + 1
            else:
                hi = mid
        if lo >= m:
            lo = m - 1
        out[s] = values[lo]
    return out
