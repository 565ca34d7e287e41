"""Pseudohyperbolic geometry of the unit disk."""
from dataclasses import dataclass

import numpy as np

from .analytic import Kernel, Moebius

# Points with |z| > 1 - ETA_BOUNDARY are rejected: 1/(1 - |z|^2) blows up roundoff.
ETA_BOUNDARY = 1e-12


@dataclass(frozen=True)
class DiskPoint:
    """A point of the open unit disk, ``|z| <= 1 - ETA_BOUNDARY``."""

    re: float
    im: float = 0.0

    def __post_init__(self):
        re, im = float(self.re), float(self.im)
        object.__setattr__(self, "re", re)
        object.__setattr__(self, "im", im)
        if not (np.isfinite(re) and np.isfinite(im)):
            raise ValueError(f"disk point must be finite, got ({re}, {im})")
        if abs(complex(re, im)) > 1.0 - ETA_BOUNDARY:
            raise ValueError(
                f"point {complex(re, im)} lies outside the disk |z| <= 1 - {ETA_BOUNDARY:g}")

    @classmethod
    def from_complex(cls, z):
        z = complex(z)
        return cls(z.real, z.imag)

    @property
    def z(self):
        return complex(self.re, self.im)

    def __complex__(self):
        return self.z

    def to_dict(self):
        return {"re": self.re, "im": self.im}


def as_complex(z):
    """Coerce a DiskPoint, number, or array of them to complex128."""
    if isinstance(z, DiskPoint):
        return z.z
    if isinstance(z, (list, tuple)) and z and isinstance(z[0], DiskPoint):
        return np.array([p.z for p in z], dtype=np.complex128)
    if np.ndim(z) == 0:
        return complex(z)
    return np.asarray(z, dtype=np.complex128)


def rho(z, w):
    """Pseudohyperbolic distance ``|(z - w) / (1 - conj(z) w)|``; broadcasts over arrays."""
    z = as_complex(z)
    w = as_complex(w)
    out = np.abs((z - w) / (1.0 - np.conj(z) * w))
    return float(out) if np.ndim(out) == 0 else out


def mobius(a):
    """The automorphism ``b_a`` with ``b_a(a) = 0``."""
    return Moebius(as_complex(DiskPoint.from_complex(as_complex(a))))


def kernel_g(w):
    """The kernel ``g_w(z) = (1 - |w|^2)/(1 - conj(w) z)^2``."""
    return Kernel(as_complex(DiskPoint.from_complex(as_complex(w))))


def one_minus_rho_sq(z, w):
    """``(1 - |z|^2)(1 - |w|^2) / |1 - conj(z) w|^2``, equal to ``1 - rho(z, w)**2``."""
    z = as_complex(z)
    w = as_complex(w)
    out = (1.0 - np.abs(z) ** 2) * (1.0 - np.abs(w) ** 2) / np.abs(1.0 - np.conj(z) * w) ** 2
    return float(out) if np.ndim(out) == 0 else out
