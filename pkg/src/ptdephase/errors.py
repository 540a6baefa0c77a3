"""Exception types raised across the package."""


class PTDephaseError(Exception):
    """Base class for all package errors."""


class DomainError(PTDephaseError, ValueError):
    """Argument outside the domain of a function."""


class SingularTransformError(DomainError):
    """The similarity transform has no inverse (exceptional point or beyond)."""


class QuadratureError(PTDephaseError, ArithmeticError):
    """Adaptive quadrature ran out of panels before meeting its tolerance.

    Attributes
    ----------
    estimate : float
        Best estimate of the integral when the panel budget was exhausted.
    error : float
        Error bound attached to ``estimate``.
    """

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error bound={error!r})")
        self.estimate = estimate
        self.error = error


class DimensionError(PTDephaseError, ValueError):
    """Fock-space dimension beyond what the dense oracle will build."""


class CutoffError(PTDephaseError, ValueError):
    """Fock cutoff too small for the requested temperature or coupling."""


class ConfigError(PTDephaseError, ValueError):
    """Invalid scenario configuration; message names the offending field."""
