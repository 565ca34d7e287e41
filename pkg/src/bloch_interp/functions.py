"""Blaschke products, the Blaschke-Lagrange dual basis, Bloch seminorm estimates."""
from dataclasses import dataclass

import numpy as np

from .analytic import (AnalyticFunction, BeurlingBasisFunction, BlaschkeProduct, Kernel,
                       LinearCombination, Moebius, Monomial, Primitive, Product, from_dict,
                       to_dict, zero_function)
from .errors import ConditioningError
from .geometry import DiskPoint
from .quadrature import audit_grid, grid_points, grid_sup

__all__ = [
    "AnalyticFunction", "BeurlingBasisFunction", "BlaschkeProduct", "Kernel", "LinearCombination",
    "Moebius", "Monomial", "Primitive", "Product", "from_dict", "to_dict", "zero_function",
    "BeurlingBasis", "BlochNormReport", "PrimitiveBoundReport", "blaschke_product",
    "beurling_basis", "bloch_seminorm", "primitive", "check_primitive_bound",
    "MIN_SEPARATION", "BOUND_SLACK",
]

# Refuse to build a basis on nodes closer than this (pseudohyperbolically).
MIN_SEPARATION = 1e-6
BOUND_SLACK = 1e-9


def blaschke_product(zeros):
    """Finite Blaschke product vanishing exactly at the points of ``zeros``."""
    return BlaschkeProduct(zeros.z if hasattr(zeros, "z") else zeros)


@dataclass
class BeurlingBasis:
    """Dual basis ``f_k(z_j) = delta_kj`` with its audited row-sum bound.

    ``m_est`` is ``max over the audit grid of sum_k |f_k(z)|``.  It belongs to
    this finite node set and is not a constant for any infinite sequence.
    """

    functions: list
    m_est: float
    delta_sep: float
    delta_unif: float

    def __len__(self):
        return len(self.functions)

    def __getitem__(self, k):
        return self.functions[k]

    def __iter__(self):
        return iter(self.functions)


def _row_sum(functions):
    def field(z):
        total = np.zeros(z.shape, dtype=float)
        for f in functions:
            total += np.abs(f(z))
        return total
    return field


def beurling_basis(seq, grid=None):
    """Blaschke-Lagrange basis ``f_k = prod_{j!=k} b_{z_j} / b_{z_j}(z_k)`` on ``seq``.

    Raises :class:`ConditioningError` when two nodes are closer than
    ``MIN_SEPARATION`` or the Carleson product underflows to zero.
    """
    rep = seq.separation
    if rep.delta_sep < MIN_SEPARATION:
        raise ConditioningError(
            f"nodes too close: delta_sep={rep.delta_sep:.3g} < {MIN_SEPARATION:g}")
    if not rep.delta_unif > 0:
        raise ConditioningError("uniform separation constant underflows to zero")
    funcs = [BeurlingBasisFunction(seq.z, k) for k in range(len(seq))]
    grid = grid or audit_grid()
    m_est, _, _ = grid_sup(_row_sum(funcs), grid, refine=False)
    # the row sum is exactly 1 at every node
    return BeurlingBasis(funcs, max(m_est, 1.0), rep.delta_sep, rep.delta_unif)


@dataclass
class BlochNormReport:
    seminorm_est: float
    argmax_point: DiskPoint
    grid_spec: dict
    f0_abs: float
    coarse_est: float

    @property
    def norm_est(self):
        return self.f0_abs + self.seminorm_est

    def to_dict(self):
        return {
            "seminorm_est": self.seminorm_est,
            "coarse_est": self.coarse_est,
            "argmax_point": self.argmax_point.to_dict(),
            "grid_spec": self.grid_spec,
            "f0_abs": self.f0_abs,
            "norm_est": self.norm_est,
        }


def weighted_deriv(f):
    """The field ``(1 - |z|^2) |f'(z)|``."""
    def field(z):
        return (1.0 - (z.real ** 2 + z.imag ** 2)) * np.abs(f.deriv(z))
    return field


def bloch_seminorm(f, grid=None, refine=True):
    """Estimate ``sup (1 - |z|^2)|f'(z)|`` on the audit grid (a lower bound).

    With ``refine`` the coarse maximum is polished by one local window pass.
    """
    grid = grid or audit_grid()
    sup, where, coarse = grid_sup(weighted_deriv(f), grid, refine=refine)
    return BlochNormReport(sup, DiskPoint.from_complex(where), grid.to_dict(),
                           abs(f(0.0)), coarse)


def primitive(fprime, f0=0.0):
    """The antiderivative of ``fprime`` with value ``f0`` at the origin."""
    return Primitive(fprime, f0)


@dataclass
class PrimitiveBoundReport:
    lhs: float
    rhs: float
    holds: bool
    lhs_argmax: DiskPoint

    def to_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds,
                "lhs_argmax": self.lhs_argmax.to_dict()}


def check_primitive_bound(f, grid=None):
    """Compare ``sup (1 - |z|^2)|f(z)|`` with ``|f(0)| + sup (1 - |z|^2)|f'(z)|``."""
    grid = grid or audit_grid()

    def field(z):
        return (1.0 - (z.real ** 2 + z.imag ** 2)) * np.abs(f(z))

    lhs, where, _ = grid_sup(field, grid, refine=True)
    rhs = bloch_seminorm(f, grid).norm_est
    return PrimitiveBoundReport(lhs, rhs, bool(lhs <= rhs + BOUND_SLACK),
                                DiskPoint.from_complex(where))


def sample_grid(f, grid):
    """Rows ``(re, im, |f|, |f'|, (1-|z|^2)|f'|)`` over ``grid``, radial-major."""
    z = grid_points(grid).reshape(-1)
    v, d = f.value_and_deriv(z)
    w = (1.0 - (z.real ** 2 + z.imag ** 2)) * np.abs(d)
    return np.column_stack([z.real, z.imag, np.abs(v), np.abs(d), w])
