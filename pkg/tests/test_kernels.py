import json
import os
import subprocess
import sys

import numpy as np
import pytest

from bloch_interp import _kernels
from conftest import random_disk

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba backend inactive")


def _direct_product(z, centers, skip):
    out = np.ones_like(z)
    for j, c in enumerate(centers):
        if j != skip:
            out = out * (z - c) / (1 - np.conj(c) * z)
    return out


@pytest.mark.parametrize("skip", [-1, 0, 3])
def test_moebius_product_matches_direct(rng, skip):
    z = random_disk(rng, 300)
    c = random_disk(rng, 6, rmax=0.99)
    v, d = _kernels.moebius_product(z, c, skip)
    assert np.allclose(v, _direct_product(z, c, skip), rtol=1e-13, atol=1e-15)
    h = 1e-6
    fd = (_direct_product(z + h, c, skip) - _direct_product(z - h, c, skip)) / (2 * h)
    assert np.allclose(d, fd, rtol=1e-6, atol=1e-8)


def test_moebius_product_keeps_shape(rng):
    z = random_disk(rng, 12).reshape(3, 4)
    v, d = _kernels.moebius_product(z, np.array([0.5 + 0j]))
    assert v.shape == d.shape == (3, 4)


def test_derivative_finite_at_zero():
    c = np.array([0.5, -0.25j])
    v, d = _kernels.moebius_product(np.array([0.5 + 0j]), c)
    assert v[0] == 0
    assert np.isfinite(d[0]) and d[0] != 0


@needs_numba
def test_backends_agree(rng):
    z = np.ascontiguousarray(random_disk(rng, 500))
    c = np.ascontiguousarray(random_disk(rng, 9, rmax=0.99))
    vn, dn = _kernels.moebius_product.numba_impl(z, c, 2)
    vp, dp = _kernels.moebius_product.numpy_impl(z, c, 2)
    assert np.allclose(vn, vp, rtol=1e-14, atol=1e-16)
    assert np.allclose(dn, dp, rtol=1e-14, atol=1e-16)
    rn = _kernels.pairwise_rho.numba_impl(c)
    rp = _kernels.pairwise_rho.numpy_impl(c)
    assert np.allclose(rn, rp, rtol=1e-15, atol=0)
    assert np.array_equal(rp, rp.T) and np.array_equal(rn, rn.T)


def test_env_flag_selects_numpy():
    env = dict(os.environ, BLOCH_INTERP_DISABLE_NUMBA="1")
    out = subprocess.run(
        [sys.executable, "-c",
         "from bloch_interp import _kernels as k; print(k.BACKEND, k.HAVE_NUMBA)"],
        env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["numpy", "False"]


def test_configure_threads():
    assert _kernels.configure_threads(1) == 1
    assert _kernels.configure_threads(0) >= 1


def test_numpy_backend_end_to_end():
    script = (
        "import json, numpy as np\n"
        "from bloch_interp import _kernels\n"
        "from bloch_interp.functions import beurling_basis\n"
        "from bloch_interp.interpolation import BLOCH, InterpolationProblem, interpolate_bloch, verify\n"
        "from bloch_interp.sequences import gen_geometric\n"
        "seq = gen_geometric(8)\n"
        "basis = beurling_basis(seq)\n"
        "p = InterpolationProblem(seq, [1, 0, 1, 0, 1, 0, 1, 0], BLOCH)\n"
        "rep = verify(p, interpolate_bloch(p, basis), basis=basis)\n"
        "print(json.dumps([_kernels.BACKEND, basis.m_est, rep.max_residual, rep.passed]))\n"
    )
    env = dict(os.environ, BLOCH_INTERP_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", script], env=env, capture_output=True,
                         text=True, check=True)
    backend, m_est, max_res, passed = json.loads(out.stdout.strip().splitlines()[-1])
    assert backend == "numpy"
    assert passed and max_res <= 1e-9
    from bloch_interp.functions import beurling_basis
    from bloch_interp.sequences import gen_geometric
    assert m_est == pytest.approx(beurling_basis(gen_geometric(8)).m_est, rel=1e-12)
