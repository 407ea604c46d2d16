"""Exception types shared across the package."""


class IosHmimoError(Exception):
    """Base class for all package-specific errors."""


class QuadratureNotConverged(IosHmimoError):
    """Fixed-order quadrature failed its refinement check."""


class InvalidAlpha(IosHmimoError):
    """Feed gain exponent outside the supported range (alpha must exceed 1)."""


class InvalidShape(IosHmimoError):
    """Nakagami shape parameter below 0.5."""


class InvalidOrder(IosHmimoError):
    """Moment order outside {1, 2, 3, 4}."""


class DimensionMismatch(IosHmimoError):
    """Grid and fading draw disagree on the number of elements."""


class DegenerateDistribution(IosHmimoError):
    """Moment pair has non-positive variance; Gamma fit undefined."""


class NonIntegrableInverseMoment(IosHmimoError):
    """Matched Gamma shape is at or below 1; E[1/|h|^2] diverges."""


class ConfigError(IosHmimoError):
    """Scenario configuration failed validation."""


class SicOrderWarning(UserWarning):
    """Decoding-order assumption violated for a channel realization."""
