"""Exception types shared across the package."""


class UmbilicLinesError(Exception):
    """Base class for all package-specific errors."""


class UnsupportedDerivativeError(UmbilicLinesError):
    """Derivative order above the supported analytic order was requested."""


class ProfileSpecError(UmbilicLinesError):
    """A scalar profile declaration is malformed."""


class OutOfStripError(UmbilicLinesError):
    """Chart evaluation requested outside the valid tubular strip."""


class DegenerateChartError(UmbilicLinesError):
    """The first fundamental form degenerated (EG - F^2 <= 0)."""


class FocalRadiusError(UmbilicLinesError):
    """A focal sheet has infinite radius (principal curvature is zero)."""

    def __init__(self, sheet: int):
        self.sheet = sheet
        super().__init__(f"focal sheet {sheet} has zero principal curvature (infinite radius)")


class UmbilicDegeneracyError(UmbilicLinesError):
    """All curvature-line coefficients vanish: the point is umbilic."""


class InconsistentDirectionsError(UmbilicLinesError):
    """The direction quadratic has negative discriminant beyond tolerance."""


class AmbiguousStartError(UmbilicLinesError):
    """Trajectory start lies on the umbilic curve; the slope is undetermined.

    Local structure at such points is the blow-up module's job; start the
    trajectory slightly off the curve instead.
    """


class HypothesisViolationError(UmbilicLinesError):
    """A computation's standing hypothesis does not hold for this surface."""


class ConfigError(UmbilicLinesError):
    """A scenario configuration file is invalid; message names the field."""
