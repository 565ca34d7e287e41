"""Hot numeric loops, with a numba path and a pure-numpy fallback.

The numba path is used when numba imports cleanly and the environment
variable ``BLOCH_INTERP_DISABLE_NUMBA`` is unset (or ``0``).  Both paths
share signatures and are exposed as ``numba_impl`` / ``numpy_impl``
attributes for benchmarking and cross-checking.

``BLOCH_INTERP_THREADS`` caps the numba thread pool (0 = auto).
"""
import os

import numpy as np

_DISABLE = os.environ.get("BLOCH_INTERP_DISABLE_NUMBA", "0").strip().lower() not in ("", "0", "false", "no")

try:
    if _DISABLE:
        raise ImportError("numba disabled by BLOCH_INTERP_DISABLE_NUMBA")
    import numba
    from numba import njit, prange
    if "NUMBA_THREADING_LAYER" not in os.environ:
        # skip the TBB probe, which warns on older system TBB builds
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    HAVE_NUMBA = True
except ImportError:
    numba = None
    HAVE_NUMBA = False

BACKEND = "numba" if HAVE_NUMBA else "numpy"


def configure_threads(n=None):
    """Apply the thread cap; returns the number of threads in effect."""
    if n is None:
        n = int(os.environ.get("BLOCH_INTERP_THREADS", "0") or 0)
    if not HAVE_NUMBA:
        return 1
    limit = numba.config.NUMBA_NUM_THREADS
    numba.set_num_threads(limit if n <= 0 else min(n, limit))
    return numba.get_num_threads()


# -- moebius_product --------------------------------------------------------
#
# P(z) = prod_{j != skip} (z - c_j) / (1 - conj(c_j) z) and P'(z), built by the
# running product rule (P b)' = P' b + P b'.  No division by factor values, so
# the derivative stays finite at the zeros.

def _moebius_product_numpy(z, centers, skip):
    z = np.asarray(z, dtype=np.complex128)
    val = np.ones_like(z)
    der = np.zeros_like(z)
    for j in range(centers.shape[0]):
        if j == skip:
            continue
        c = centers[j]
        den = 1.0 - np.conj(c) * z
        b = (z - c) / den
        db = (1.0 - (c.real * c.real + c.imag * c.imag)) / (den * den)
        der = der * b + val * db
        val = val * b
    return val, der


if HAVE_NUMBA:
    @njit(cache=True, parallel=True)
    def _moebius_product_numba(z, centers, skip):
        n = z.shape[0]
        vals = np.empty(n, dtype=np.complex128)
        ders = np.empty(n, dtype=np.complex128)
        for i in prange(n):
            zi = z[i]
            val = 1.0 + 0.0j
            der = 0.0j
            for j in range(centers.shape[0]):
                if j == skip:
                    continue
                c = centers[j]
                den = 1.0 - np.conj(c) * zi
                b = (zi - c) / den
                db = (1.0 - (c.real * c.real + c.imag * c.imag)) / (den * den)
                der = der * b + val * db
                val = val * b
            vals[i] = val
            ders[i] = der
        return vals, ders

    @njit(cache=True)
    def _pairwise_rho_numba(pts):
        n = pts.shape[0]
        out = np.zeros((n, n), dtype=np.float64)
        for i in range(n):
            for j in range(i + 1, n):
                r = abs((pts[i] - pts[j]) / (1.0 - np.conj(pts[i]) * pts[j]))
                out[i, j] = r
                out[j, i] = r
        return out
else:
    _moebius_product_numba = None
    _pairwise_rho_numba = None


def moebius_product(z, centers, skip=-1):
    """Value and derivative of a product of Möbius factors.

    Parameters
    ----------
    z : array_like of complex
        Evaluation points (any shape).
    centers : ndarray of complex128
        Factor centres ``c_j``; factor ``j`` is ``(z - c_j)/(1 - conj(c_j) z)``.
    skip : int
        Index of a factor to omit, or -1.

    Returns
    -------
    (value, derivative) : tuple of ndarray, each shaped like ``z``
    """
    z = np.asarray(z, dtype=np.complex128)
    centers = np.ascontiguousarray(centers, dtype=np.complex128)
    shape = z.shape
    flat = np.ascontiguousarray(z.reshape(-1))
    if HAVE_NUMBA:
        v, d = _moebius_product_numba(flat, centers, int(skip))
    else:
        v, d = _moebius_product_numpy(flat, centers, int(skip))
    return v.reshape(shape), d.reshape(shape)


moebius_product.numpy_impl = _moebius_product_numpy
moebius_product.numba_impl = _moebius_product_numba


def _pairwise_rho_numpy(pts):
    zi = pts[:, None]
    zj = pts[None, :]
    out = np.triu(np.abs((zi - zj) / (1.0 - np.conj(zi) * zj)), 1)
    return out + out.T


def pairwise_rho(points):
    """Symmetric matrix of pseudohyperbolic distances, zero diagonal."""
    pts = np.ascontiguousarray(points, dtype=np.complex128)
    if HAVE_NUMBA:
        return _pairwise_rho_numba(pts)
    return _pairwise_rho_numpy(pts)


pairwise_rho.numpy_impl = _pairwise_rho_numpy
pairwise_rho.numba_impl = _pairwise_rho_numba
