"""Exception types and warnings shared across the package."""


class CavsqError(Exception):
    """Base class for all package-specific errors."""


class InvalidSpecError(CavsqError, ValueError):
    """Ensemble specification is unusable (e.g. non-positive spin)."""


class IncompleteBandError(CavsqError, ValueError):
    """A phase band is missing entries for a required offset."""


class DegenerateDirectionError(CavsqError, ValueError):
    """Mean spin length vanished; the squeezing parameter is undefined."""


class NumericFailureError(CavsqError, RuntimeError):
    """A numeric routine failed to reach its requested tolerance."""

    def __init__(self, message: str, achieved_tol: float | None = None):
        super().__init__(message)
        self.achieved_tol = achieved_tol


class NoFiniteTimeError(CavsqError, ValueError):
    """Requested shearing strength is unreachable at any finite time."""


class BelowRegimeError(CavsqError, ValueError):
    """Detuning below the smallest value for which the closed forms hold."""

    def __init__(self, message: str, bound: float):
        super().__init__(message)
        self.bound = bound


class ComplexDiscriminantError(CavsqError, ValueError):
    """Verbatim squeezing formula produced a negative discriminant."""

    def __init__(self, message: str, discriminant: float):
        super().__init__(message)
        self.discriminant = discriminant


class NoMinimumError(CavsqError, ValueError):
    """Objective was not finite anywhere on the pre-grid."""


class ConfigError(CavsqError, ValueError):
    """Bad command-line or config-file input."""


class RegimeWarning(UserWarning):
    """A closed-form model was evaluated outside its validity regime."""
