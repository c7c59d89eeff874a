import os
import subprocess
import sys

import numpy as np
import pytest

from gradshift import _kernels
from gradshift._kernels import _numpy

numba_impl = pytest.importorskip("gradshift._kernels._numba")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def test_apply_chain_backends_agree(rng):
    d = 16
    mats = rng.normal(size=(5, d, d)) + 1j * rng.normal(size=(5, d, d))
    state = rng.normal(size=d) + 1j * rng.normal(size=d)
    expected = state
    for m in mats:
        expected = m @ expected
    np.testing.assert_allclose(_numpy.apply_chain(state, mats), expected, rtol=1e-12)
    np.testing.assert_allclose(numba_impl.apply_chain(state, mats), expected, rtol=1e-12)


def test_apply_chain_empty_stack(rng):
    state = rng.normal(size=4) + 0j
    empty = np.zeros((0, 4, 4), dtype=complex)
    np.testing.assert_array_equal(numba_impl.apply_chain(state, empty), state)
    np.testing.assert_array_equal(_numpy.apply_chain(state, empty), state)


def test_quadratic_form_backends_agree(rng):
    d = 8
    op = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    state = rng.normal(size=d) + 1j * rng.normal(size=d)
    ref = np.vdot(state, op @ state)
    assert abs(_numpy.quadratic_form(state, op) - ref) < 1e-12
    assert abs(numba_impl.quadratic_form(state, op) - ref) < 1e-12


def test_group_probabilities_bitwise(rng):
    amps = rng.normal(size=32) + 1j * rng.normal(size=32)
    labels = np.sort(rng.integers(0, 5, size=32))
    a = _numpy.group_probabilities(amps, labels, 6)
    b = numba_impl.group_probabilities(amps, labels, 6)
    np.testing.assert_array_equal(a, b)
    assert a[5] == 0.0


def test_inverse_cdf_bitwise(rng):
    cdf = np.array([0.1, 0.35, 0.35, 0.9, 1.0])
    values = np.array([-2.0, -1.0, 0.0, 1.0, 2.0])
    u = np.concatenate([rng.random(10_000), [0.0, 0.1, 0.35, 0.9, 0.999999999]])
    a = _numpy.inverse_cdf(cdf, values, u)
    b = numba_impl.inverse_cdf(cdf, values, u)
    np.testing.assert_array_equal(a, b)
    # zero-probability bin never drawn; boundaries belong to the next bin
    assert not np.any(a == 0.0)
    np.testing.assert_array_equal(a[-5:], [-2.0, -1.0, 1.0, 2.0, 2.0])


def _backend_in_subprocess(flag):
    env = dict(os.environ)
    if flag is None:
        env.pop("GRADSHIFT_DISABLE_NUMBA", None)
    else:
        env["GRADSHIFT_DISABLE_NUMBA"] = flag
    out = subprocess.run([sys.executable, "-c", "import gradshift; print(gradshift.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    return out.stdout.strip()


def test_env_flag_selects_numpy():
    assert _backend_in_subprocess("1") == "numpy"
    assert _backend_in_subprocess(None) == "numba"


def test_backends_give_identical_shots():
    code = (
        "import numpy as np\n"
        "from gradshift.ensemble import random_ensemble\n"
        "from gradshift.costfn import sample_shots\n"
        "c, th = random_ensemble(3, 1, qubits=(3, 3))[0]\n"
        "print(sample_shots(c, th, 2000, seed=9).tobytes().hex())\n"
    )
    outs = []
    for flag in ("1", "0"):
        env = dict(os.environ, GRADSHIFT_DISABLE_NUMBA=flag)
        outs.append(subprocess.run([sys.executable, "-c", code], env=env,
                                   capture_output=True, text=True, check=True).stdout)
    assert outs[0] == outs[1]


def test_active_backend_is_reported():
    assert _kernels.BACKEND in ("numba", "numpy")
