class BlochInterpError(Exception):
    """Base class for numerical failures raised by this package."""


class ConditioningError(BlochInterpError):
    """Interpolation nodes are too close together to build a usable basis."""


class DegenerateExtensionError(BlochInterpError):
    """The appended point coincides (numerically) with an existing node."""


class QuadratureError(BlochInterpError):
    """A quadrature rule failed to reach its tolerance or met a non-finite value."""

    def __init__(self, message, error_estimate=None, location=None):
        super().__init__(message)
        self.error_estimate = error_estimate
        self.location = location
