"""Interpolating sequences for the Bloch space and H-infinity, numerically."""
from ._kernels import BACKEND
from .errors import BlochInterpError, ConditioningError, DegenerateExtensionError, QuadratureError
from .functions import (BeurlingBasis, BlochNormReport, beurling_basis, blaschke_product,
                        bloch_seminorm, check_primitive_bound, primitive)
from .geometry import ETA_BOUNDARY, DiskPoint, kernel_g, mobius, rho
from .interpolation import (InterpolationProblem, ResidualReport, append_point, interpolate_bloch,
                            interpolate_hinf, quantize_to_simple, simple_function_compose, verify)
from .quadrature import GridSpec, audit_grid, bergman_pairing, disk_integral, parse_poly
from .sequences import (N_MAX, PointSequence, SeparationReport, augment_close, gen_geometric,
                        hayman_bounds, separation_report)

__version__ = "0.1.0"
