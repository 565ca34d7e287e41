"""Interpolants for H-infinity values and Bloch weighted derivatives.

H-infinity:  ``f = sum_k a_k f_k`` so that ``f(z_n) = a_n``.
Bloch:       ``f' = sum_k a_k g_{z_k} f_k`` so that ``(1 - |z_n|^2) f'(z_n) = a_n``,
             since ``g_{z_k}(z_k) = 1/(1 - |z_k|^2)``; then ``f(0) = 0``.

Here ``f_k`` is the Blaschke-Lagrange basis of :func:`beurling_basis` and
``g_w`` the kernel of :func:`kernel_g`.  Because
``(1 - |z|^2)|g_w(z)| = 1 - rho(w, z)**2 <= 1``, the Bloch seminorm of the
interpolant is at most ``M_est * sup|a|``; the looser ``4 * M_est * sup|a|``
is what gets checked.
"""
from dataclasses import dataclass, field

import numpy as np

from .analytic import Kernel, LinearCombination, Primitive, Product, zero_function
from .errors import DegenerateExtensionError
from .functions import BOUND_SLACK, MIN_SEPARATION, beurling_basis, blaschke_product, bloch_seminorm
from .geometry import as_complex, rho
from .quadrature import audit_grid, grid_sup
from .sequences import PointSequence

HINF = "hinf"
BLOCH = "bloch"
DEFAULT_TOL = 1e-9
NORM_FACTOR = 4.0


def _targets(values):
    out = []
    for v in values:
        if isinstance(v, (list, tuple)):
            if len(v) != 2:
                raise ValueError(f"target pair must be [re, im], got {v!r}")
            out.append(complex(float(v[0]), float(v[1])))
        elif isinstance(v, dict):
            out.append(complex(float(v["re"]), float(v.get("im", 0.0))))
        else:
            out.append(complex(v))
    arr = np.array(out, dtype=np.complex128)
    if not np.all(np.isfinite(arr)):
        raise ValueError("targets must be finite")
    return arr


@dataclass
class InterpolationProblem:
    seq: PointSequence
    targets: np.ndarray
    space: str = BLOCH

    def __post_init__(self):
        self.targets = _targets(self.targets)
        self.space = str(self.space).lower()
        if self.space not in (HINF, BLOCH):
            raise ValueError(f"space must be 'bloch' or 'hinf', got {self.space!r}")
        if len(self.targets) != len(self.seq):
            raise ValueError(
                f"{len(self.targets)} targets for a sequence of {len(self.seq)} points")

    @property
    def sup_norm(self):
        return float(np.max(np.abs(self.targets))) if len(self.targets) else 0.0

    def to_dict(self):
        return {
            "sequence": self.seq.to_dict(),
            "targets": [[t.real, t.imag] for t in self.targets],
            "space": self.space,
        }

    @classmethod
    def from_dict(cls, data):
        if not isinstance(data, dict) or not {"sequence", "targets"} <= data.keys():
            raise ValueError("problem JSON needs 'sequence' and 'targets'")
        return cls(PointSequence.from_dict(data["sequence"]), data["targets"],
                   data.get("space", BLOCH))


def _combine(coeffs, terms):
    keep = [(c, t) for c, t in zip(coeffs, terms) if c != 0]
    if not keep:
        return zero_function()
    return LinearCombination([c for c, _ in keep], [t for _, t in keep])


def interpolate_hinf(problem, basis=None):
    """``f = sum_k a_k f_k`` with ``f(z_n) = a_n``."""
    if problem.space != HINF:
        raise ValueError("interpolate_hinf needs space='hinf'")
    basis = basis or beurling_basis(problem.seq)
    return _combine(problem.targets, basis.functions)


def bloch_derivative(seq, targets, basis):
    """The closed-form ``f' = sum_k a_k g_{z_k} f_k``."""
    terms = [Product([Kernel(zk), fk]) for zk, fk in zip(seq.z, basis.functions)]
    return _combine(targets, terms)


def interpolate_bloch(problem, basis=None):
    """Primitive of ``sum_k a_k g_{z_k} f_k`` with ``f(0) = 0``."""
    if problem.space != BLOCH:
        raise ValueError("interpolate_bloch needs space='bloch'")
    basis = basis or beurling_basis(problem.seq)
    return Primitive(bloch_derivative(problem.seq, problem.targets, basis), 0.0)


def interpolate(problem, basis=None):
    if problem.space == HINF:
        return interpolate_hinf(problem, basis)
    return interpolate_bloch(problem, basis)


def append_point(f, seq, z0, a1):
    """Extend ``f`` to also take the value ``a1`` at a new point ``z0``.

    ``g = (a1 - f(z0)) / B(z0) * B + f`` with ``B`` the Blaschke product of
    ``seq``; ``B`` vanishes on ``seq`` so ``g`` keeps every old value.
    """
    z0 = as_complex(z0)
    a1 = complex(a1)
    dist = float(np.min(rho(z0, seq.z)))
    if dist < MIN_SEPARATION:
        raise DegenerateExtensionError(
            f"z0={z0} is within rho={dist:.3g} of an existing node")
    B = blaschke_product(seq)
    alpha = B(z0)
    if abs(alpha) <= 1e-12:
        raise DegenerateExtensionError(f"B(z0)={abs(alpha):.3g} is numerically zero")
    coeff = (a1 - f(z0)) / alpha
    if coeff == 0:
        return f
    return LinearCombination([coeff, 1.0], [B, f])


def simple_function_compose(seq, levels, parts, basis=None):
    """Bloch interpolant of ``sum_i levels[i] * chi_{parts[i]}`` built from idempotents.

    Each part gets its own idempotent interpolant ``f_i``; the result is
    ``sum_i levels[i] * f_i``.  ``parts`` holds 0-based index collections.
    """
    parts = [sorted(int(i) for i in p) for p in parts]
    if len(levels) != len(parts):
        raise ValueError(f"{len(levels)} levels for {len(parts)} parts")
    seen = set()
    for p in parts:
        for i in p:
            if not 0 <= i < len(seq):
                raise ValueError(f"part index {i} out of range for {len(seq)} nodes")
            if i in seen:
                raise ValueError(f"parts overlap at index {i}")
            seen.add(i)
    basis = basis or beurling_basis(seq)
    pieces = []
    for p in parts:
        chi = np.zeros(len(seq))
        chi[p] = 1.0
        pieces.append(interpolate_bloch(InterpolationProblem(seq, chi, BLOCH), basis))
    return LinearCombination([complex(a) for a in levels], pieces)


def quantize_to_simple(targets, eps):
    """Group targets into parts of equal value after rounding to an ``eps`` grid.

    A part whose members are all equal keeps that exact value as its
    level; otherwise the level is the centre of the grid cell, within
    ``eps * sqrt(2) / 2`` of every member.  Parts come in order of first
    appearance.
    """
    eps = float(eps)
    if not eps > 0:
        raise ValueError(f"eps must be positive, got {eps}")
    t = _targets(targets)
    cells = {}
    order = []
    for n, v in enumerate(t):
        key = (int(np.rint(v.real / eps)), int(np.rint(v.imag / eps)))
        if key not in cells:
            cells[key] = []
            order.append(key)
        cells[key].append(n)
    levels, parts = [], []
    for key in order:
        members = cells[key]
        vals = t[members]
        if np.all(vals == vals[0]):
            levels.append(complex(vals[0]))
        else:
            levels.append(complex(key[0] * eps, key[1] * eps))
        parts.append(members)
    return levels, parts


@dataclass
class ResidualReport:
    residuals: list
    max_residual: float
    tol: float
    passed: bool
    space: str
    norm_bound_check: float = None
    norm_estimate: float = None
    norm_bound: float = None
    norm_bound_ok: bool = None
    m_est: float = None
    notes: list = field(default_factory=list)

    def to_dict(self):
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


def residuals(problem, f):
    z = problem.seq.z
    if problem.space == BLOCH:
        got = (1.0 - np.abs(z) ** 2) * f.deriv(z)
    else:
        got = f(z)
    return np.abs(got - problem.targets)


def verify(problem, f, tol=DEFAULT_TOL, check_norm=True, basis=None):
    """Residuals at the nodes, and the norm bound against ``M_est * sup|a|``.

    ``passed`` reflects the residuals only.  For Bloch problems the
    seminorm estimate is compared with ``4 * M_est * sup|a|``; for H-inf the
    sup of ``|f|`` on the audit grid is compared with ``M_est * sup|a|``.
    ``norm_bound_check`` is the ratio estimate / bound (0 when both vanish).
    """
    res = residuals(problem, f)
    max_res = float(res.max())
    rep = ResidualReport([float(r) for r in res], max_res, float(tol),
                         bool(max_res <= tol), problem.space)
    rep.notes.append("basis is the finite Blaschke-Lagrange surrogate; M_est is its audited "
                     "row-sum bound, not a constant of any infinite sequence")
    if check_norm:
        basis = basis or beurling_basis(problem.seq)
        sup_a = problem.sup_norm
        if problem.space == BLOCH:
            est = bloch_seminorm(f).seminorm_est
            bound = NORM_FACTOR * basis.m_est * sup_a
        else:
            est, _, _ = grid_sup(lambda z: np.abs(f(z)), audit_grid(), refine=False)
            bound = basis.m_est * sup_a
        rep.m_est = basis.m_est
        rep.norm_estimate = float(est)
        rep.norm_bound = float(bound)
        rep.norm_bound_ok = bool(est <= bound + BOUND_SLACK)
        rep.norm_bound_check = float(est / bound) if bound > 0 else 0.0
    return rep
