"""Exception hierarchy shared by all modules."""


class AnnulusError(Exception):
    """Base class for every error raised by the package."""


class DomainError(AnnulusError, ValueError):
    """An argument lies outside the domain of the requested operation."""


class IterationLimitError(AnnulusError, RuntimeError):
    """A root refinement or scan did not finish within its iteration budget."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class QuadratureError(AnnulusError, RuntimeError):
    """Adaptive quadrature hit its panel cap before reaching tolerance."""


class PreconditionError(AnnulusError, ValueError):
    """A numerical precondition (e.g. a vanishing boundary value) failed."""


class PolePlaneError(DomainError):
    """Evaluation requested too close to the plane x_N = y_N."""


class RegionError(DomainError):
    """Point lies outside the region where the harmonic extension exists."""


class TruncationError(AnnulusError, RuntimeError):
    """The requested truncation cannot meet the tail tolerance."""

    def __init__(self, message, tail_estimate=None):
        super().__init__(message)
        self.tail_estimate = tail_estimate


class ConfigError(DomainError):
    """Invalid command line or configuration file."""
