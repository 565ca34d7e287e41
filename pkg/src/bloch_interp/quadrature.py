"""Grids and quadrature on the unit disk.

Two grid schemes share :class:`GridSpec`:

* ``"gauss-legendre"``: Gauss-Legendre in ``r`` on ``[0, 1 - ETA_BOUNDARY]``
  times the trapezoid rule in ``theta``, for integrals against the
  normalized area measure ``dm = r dr dtheta / pi``.
* ``"radial-exponential"``: the audit grid used for suprema,
  ``r_i = 1 - 2**(-i / levels_per_octave)`` and equispaced angles, which
  clusters rings near the boundary where weighted derivatives peak.
"""
from dataclasses import asdict, dataclass
from functools import lru_cache

import numpy as np

from .analytic import LinearCombination, Monomial
from .errors import QuadratureError
from .geometry import ETA_BOUNDARY

GAUSS_LEGENDRE = "gauss-legendre"
RADIAL_EXPONENTIAL = "radial-exponential"

# Integration default: doubled until successive estimates agree to 1e-11 (3 doublings max).
DEFAULT_RADIAL = 64
DEFAULT_ANGULAR = 256
ADAPT_ABS_TOL = 1e-11
ADAPT_MAX_DOUBLINGS = 3

REFINE_FACTOR = 10


@dataclass(frozen=True)
class GridSpec:
    radial_nodes: int
    angular_nodes: int
    scheme: str = GAUSS_LEGENDRE
    levels_per_octave: int = 4

    def __post_init__(self):
        if self.scheme not in (GAUSS_LEGENDRE, RADIAL_EXPONENTIAL):
            raise ValueError(f"unknown grid scheme {self.scheme!r}")
        if self.radial_nodes < 4:
            raise ValueError("radial_nodes must be >= 4")
        if self.angular_nodes < 8 or self.angular_nodes % 2:
            raise ValueError("angular_nodes must be an even number >= 8")
        if self.levels_per_octave < 1:
            raise ValueError("levels_per_octave must be >= 1")

    def to_dict(self):
        return asdict(self)


def audit_grid(radial_nodes=49, angular_nodes=256):
    """Default supremum grid: rings ``1 - 2**(-i/4)``, i = 0..48, 256 angles."""
    return GridSpec(radial_nodes, angular_nodes, RADIAL_EXPONENTIAL)


def _audit_radius(num, den):
    # r = 1 - 2**(-num / den); num/den is a ring index in "levels" units
    return 1.0 - np.exp2(-(np.asarray(num, dtype=float) / den))


def _audit_angle(num, count):
    return 2.0 * np.pi * (np.asarray(num, dtype=float) / count)


@lru_cache(maxsize=16)
def _gl_nodes(n):
    return np.polynomial.legendre.leggauss(n)


def grid_points(grid):
    """All grid points as a ``(radial_nodes, angular_nodes)`` complex array, radial-major."""
    if grid.scheme == RADIAL_EXPONENTIAL:
        r = _audit_radius(np.arange(grid.radial_nodes), grid.levels_per_octave)
    else:
        x, _ = _gl_nodes(grid.radial_nodes)
        r = (1.0 - ETA_BOUNDARY) * (x + 1.0) / 2.0
    theta = _audit_angle(np.arange(grid.angular_nodes), grid.angular_nodes)
    return r[:, None] * np.exp(1j * theta)[None, :]


def grid_sup(field, grid, refine=True):
    """Maximize a real field over a radial-exponential grid.

    ``field`` maps a complex array to a real array of the same shape.  The
    optional refinement evaluates a 21x21 window spanning one coarse step
    either side of the coarse argmax, at a tenth of the coarse spacing in
    ring index and angle.  Those points coincide with the grid ten times
    denser, so the refined value equals that denser grid's maximum whenever
    the peak is isolated.

    Returns ``(sup, argmax, coarse_sup)``.  Both sups are lower bounds of
    the true supremum.
    """
    if grid.scheme != RADIAL_EXPONENTIAL:
        raise ValueError("grid_sup needs a radial-exponential grid")
    pts = grid_points(grid)
    vals = np.asarray(field(pts), dtype=float)
    if not np.all(np.isfinite(vals)):
        raise QuadratureError("non-finite field value on the audit grid",
                              location=complex(pts[~np.isfinite(vals)][0]))
    i, j = np.unravel_index(int(np.argmax(vals)), vals.shape)
    coarse = float(vals[i, j])
    best, where = coarse, complex(pts[i, j])
    if not refine:
        return best, where, coarse
    f = REFINE_FACTOR
    lpo = grid.levels_per_octave * f
    na = grid.angular_nodes * f
    s = np.arange(f * i - f, f * i + f + 1)
    s = s[(s >= 0) & (s <= f * (grid.radial_nodes - 1))]
    t = np.arange(f * j - f, f * j + f + 1) % na
    window = _audit_radius(s, lpo)[:, None] * np.exp(1j * _audit_angle(t, na))[None, :]
    wvals = np.asarray(field(window), dtype=float)
    k = int(np.argmax(wvals))
    if wvals.flat[k] > best:
        best, where = float(wvals.flat[k]), complex(window.flat[k])
    return best, where, coarse


def _integrate_once(integrand, grid):
    x, w = _gl_nodes(grid.radial_nodes)
    outer = 1.0 - ETA_BOUNDARY
    r = outer * (x + 1.0) / 2.0
    wr = outer * w / 2.0
    pts = grid_points(grid)
    vals = np.asarray(integrand(pts.reshape(-1)), dtype=np.complex128).reshape(pts.shape)
    bad = ~np.isfinite(vals)
    if bad.any():
        loc = complex(pts[bad][0])
        raise QuadratureError(f"non-finite integrand at z={loc!r}", location=loc)
    ring_means = vals.mean(axis=1)
    return complex(np.sum(wr * 2.0 * r * ring_means))


def disk_integral(integrand, grid=None):
    """Integrate over the disk against normalized area measure (``m(D) = 1``).

    ``integrand`` takes and returns complex arrays.  With an explicit
    ``grid`` the tensor rule is applied once.  Without one, the default
    64 x 256 rule is doubled in both directions until two successive
    values agree to 1e-11 or three doublings have been made.
    """
    if grid is not None:
        if grid.scheme != GAUSS_LEGENDRE:
            raise ValueError("disk_integral needs a gauss-legendre grid")
        return _integrate_once(integrand, grid)
    grid = GridSpec(DEFAULT_RADIAL, DEFAULT_ANGULAR)
    prev = _integrate_once(integrand, grid)
    for _ in range(ADAPT_MAX_DOUBLINGS):
        grid = GridSpec(2 * grid.radial_nodes, 2 * grid.angular_nodes)
        cur = _integrate_once(integrand, grid)
        if abs(cur - prev) < ADAPT_ABS_TOL:
            return cur
        prev = cur
    return prev


def bergman_pairing(f, h, grid=None):
    """``int_D f(z) conj(h(z)) (1 - |z|^2) dm(z)``; linear in f, conjugate-linear in h."""

    def integrand(z):
        return f(z) * np.conj(h(z)) * (1.0 - (z.real ** 2 + z.imag ** 2))

    return disk_integral(integrand, grid)


def monomial_pairing(m, k):
    """Closed form of ``bergman_pairing(z**m, z**k)``."""
    return 1.0 / ((m + 1) * (m + 2)) if m == k else 0.0


def _parse_coeff(text):
    t = text.strip().replace(" ", "")
    if not t:
        raise ValueError("empty coefficient")
    if t.endswith("i") or t.endswith("j"):
        body = t[:-1]
        # bare "i", "-i", "2+i"
        if body == "" or body[-1] in "+-":
            body += "1"
        t = body + "j"
    try:
        return complex(t)
    except ValueError:
        raise ValueError(f"cannot parse coefficient {text!r}") from None


def parse_poly(literal):
    """Parse ``"poly:c0,c1,...,ck"`` into ``sum c_j z**j``.

    Coefficients are real or complex, written ``re+imi`` (``j`` also accepted).
    """
    if not isinstance(literal, str) or not literal.startswith("poly:"):
        raise ValueError(f"polynomial literal must start with 'poly:', got {literal!r}")
    body = literal[len("poly:"):]
    if not body.strip():
        raise ValueError("polynomial literal has no coefficients")
    coeffs = [_parse_coeff(c) for c in body.split(",")]
    return LinearCombination(coeffs, [Monomial(j) for j in range(len(coeffs))])


def poly_support(poly):
    """``[(power, coeff), ...]`` of nonzero terms of a parsed literal."""
    return [(t.power, c * t.coeff) for c, t in zip(poly.coeffs, poly.terms) if c * t.coeff != 0]
