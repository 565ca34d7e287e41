"""Finite point sequences in the disk and their separation diagnostics."""
import math
from dataclasses import asdict, dataclass, field
from functools import cached_property

import numpy as np

from ._kernels import pairwise_rho
from .geometry import DiskPoint, as_complex, rho

# Carleson products of longer near-boundary sequences underflow in double precision.
N_MAX = 64

HAYMAN_THRESHOLD = math.exp(-2.0)


class PointSequence:
    """Ordered, pairwise-distinct points of the disk (1 <= N <= N_MAX).

    ``z`` is a read-only complex128 view; ``points`` the same as DiskPoints.
    """

    def __init__(self, points, label=""):
        pts = []
        for p in points:
            if isinstance(p, DiskPoint):
                pts.append(p)
            elif isinstance(p, dict):
                pts.append(DiskPoint(p["re"], p.get("im", 0.0)))
            else:
                pts.append(DiskPoint.from_complex(p))
        if not 1 <= len(pts) <= N_MAX:
            raise ValueError(f"sequence length must be in [1, {N_MAX}], got {len(pts)}")
        z = np.array([p.z for p in pts], dtype=np.complex128)
        z.setflags(write=False)
        if len(pts) > 1:
            r = pairwise_rho(z)
            np.fill_diagonal(r, 1.0)
            if not np.all(r > 0):
                i, j = np.argwhere(r <= 0)[0]
                raise ValueError(f"points {i} and {j} coincide ({z[i]})")
        self.points = tuple(pts)
        self.z = z
        self.label = str(label)

    def __len__(self):
        return len(self.points)

    def __getitem__(self, i):
        return self.points[i]

    def __iter__(self):
        return iter(self.points)

    def __repr__(self):
        return f"PointSequence(label={self.label!r}, n={len(self)})"

    @cached_property
    def rho_matrix(self):
        m = pairwise_rho(self.z)
        m.setflags(write=False)
        return m

    @cached_property
    def separation(self):
        return separation_report(self)

    def to_dict(self):
        return {"label": self.label, "points": [p.to_dict() for p in self.points]}

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or "points" not in data:
            raise ValueError("sequence JSON must be an object with a 'points' list")
        try:
            pts = [DiskPoint(float(p["re"]), float(p.get("im", 0.0))) for p in data["points"]]
        except (KeyError, TypeError, AttributeError) as exc:
            raise ValueError(f"malformed point entry: {exc}") from exc
        return cls(pts, data.get("label", ""))


@dataclass
class SeparationReport:
    delta_sep: float
    delta_unif: float
    blaschke_sum: float
    per_point_products: list = field(default_factory=list)
    n: int = 0

    def to_dict(self):
        return asdict(self)


def separation_report(seq):
    """Pairwise separation, Carleson uniform-separation constant, Blaschke sum.

    The per-point products ``prod_{n != k} rho(z_n, z_k)`` are accumulated
    as sums of logarithms.  A single point has no pairs; both constants
    are then reported as 1.
    """
    n = len(seq)
    blaschke_sum = math.fsum(1.0 - abs(z) for z in seq.z)
    if n == 1:
        return SeparationReport(1.0, 1.0, blaschke_sum, [1.0], 1)
    r = np.array(seq.rho_matrix)
    off = ~np.eye(n, dtype=bool)
    delta_sep = float(r[off].min())
    with np.errstate(divide="ignore"):
        logs = np.where(off, np.log(np.where(off, r, 1.0)), 0.0)
    products = np.exp(logs.sum(axis=1))
    return SeparationReport(delta_sep, float(products.min()), blaschke_sum,
                            [float(p) for p in products], n)


def gen_geometric(n):
    """The points ``1 - 2**-k`` for k = 1..n."""
    if isinstance(n, bool) or int(n) != n or not 1 <= n <= N_MAX:
        raise ValueError(f"n must be an integer in [1, {N_MAX}], got {n!r}")
    n = int(n)
    try:
        return PointSequence([1.0 - 2.0 ** -k for k in range(1, n + 1)], f"geometric-{n}")
    except ValueError as exc:
        raise ValueError(f"gen_geometric({n}) reaches the boundary guard: {exc}") from None


def close_point(z1, distance):
    """The point at pseudohyperbolic distance ``distance`` from ``z1``, towards -1.

    For real ``z1`` this is ``(z1 - s)/(1 - s z1)``, on the real axis left of ``z1``.
    """
    z1 = as_complex(z1)
    s = float(distance)
    return (z1 - s) / (1.0 - s * z1.conjugate())


def augment_close(seq, eps):
    """Prepend a point ``z_0`` with ``rho(z_0, z_1) = eps/2`` to ``seq``."""
    eps = float(eps)
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must lie in (0, 1), got {eps}")
    if len(seq) + 1 > N_MAX:
        raise ValueError(f"augmented sequence would exceed N_MAX={N_MAX}")
    z1 = complex(seq.z[0])
    z0 = close_point(z1, eps / 2.0)
    if z0 == z1 or not 0.0 < rho(z0, z1) < eps:
        raise ValueError(f"eps={eps:g} too small: no representable point distinct from {z1}")
    try:
        return PointSequence([z0, *seq.z], f"{seq.label}+close({eps:g})")
    except ValueError as exc:
        raise ValueError(f"augment_close(eps={eps:g}) failed: {exc}") from None


@dataclass
class HaymanReport:
    indices: list
    hypothesis_holds: bool
    violations: list
    products: list
    threshold: float = HAYMAN_THRESHOLD
    bound_holds: bool = None
    passed: bool = False

    def to_dict(self):
        return asdict(self)


def hayman_bounds(seq, sub):
    """Check the pairwise hypothesis and the product bound on a subsequence.

    For positions ``k < p`` of ``sub`` the hypothesis is
    ``|b_{n_k}(z_{n_p})| > exp(-2**-(p-k))``.  The products
    ``Q_k = prod_{p != k} |b_{n_k}(z_{n_p})|`` are always reported; the
    bound ``Q_k > e**-2`` is only asserted when the hypothesis holds
    (``bound_holds`` is None otherwise).
    """
    idx = [int(i) for i in sub]
    if not idx:
        raise ValueError("subsequence must be nonempty")
    if any(i < 0 or i >= len(seq) for i in idx):
        raise ValueError(f"subsequence indices out of range for length {len(seq)}")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError("subsequence indices must be strictly increasing")
    r = np.asarray(seq.rho_matrix)[np.ix_(idx, idx)]
    m = len(idx)
    violations = []
    for k in range(m):
        for p in range(k + 1, m):
            if not r[k, p] > math.exp(-(2.0 ** -(p - k))):
                violations.append([idx[k], idx[p]])
    products = []
    for k in range(m):
        products.append(math.prod(float(r[k, p]) for p in range(m) if p != k))
    hyp = not violations
    bound = all(q > HAYMAN_THRESHOLD for q in products) if hyp else None
    return HaymanReport(idx, hyp, violations, products, HAYMAN_THRESHOLD, bound, bool(hyp and bound))
