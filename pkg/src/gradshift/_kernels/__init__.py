"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is picked once at import time. Set ``GRADSHIFT_DISABLE_NUMBA=1``
to force the numpy path (also used automatically when numba is missing).
Both backends expose the same four functions with identical semantics:

``apply_chain(state, mats)``
    Multiply ``state`` by ``mats[0]``, then ``mats[1]``, ... and return the result.
``quadratic_form(state, op)``
    ``<state|op|state>`` as a complex number.
``group_probabilities(amps, labels, n_groups)``
    Sum ``|amps|**2`` into ``n_groups`` bins given by ``labels``.
``inverse_cdf(cdf, values, u)``
    Map uniforms ``u`` to ``values[k]`` with ``k`` the first index where ``u < cdf[k]``.
"""
from __future__ import annotations

import os

from . import _numpy

_DISABLED = os.environ.get("GRADSHIFT_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    if _DISABLED:
        raise ImportError("numba disabled by GRADSHIFT_DISABLE_NUMBA")
    from . import _numba as _impl

    BACKEND = "numba"
except ImportError:
    _impl = _numpy
    BACKEND = "numpy"

apply_chain = _impl.apply_chain
quadratic_form = _impl.quadratic_form
group_probabilities = _impl.group_probabilities
inverse_cdf = _impl.inverse_cdf

__all__ = [
    "BACKEND",
    "apply_chain",
    "quadratic_form",
    "group_probabilities",
    "inverse_cdf",
]
