"""Exception types raised across the package."""


class RisbalError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(RisbalError, ValueError):
    """Operands have incompatible shapes."""


class RetractionSingularError(RisbalError, ArithmeticError):
    """Retraction input has a zero entry; the step is degenerate."""


class NumericalError(RisbalError, ArithmeticError):
    """A numerical routine produced non-finite values or failed to converge."""


class GeometryError(RisbalError, ValueError):
    """Invalid geometric configuration (e.g. coincident points)."""


class ConfigError(RisbalError, ValueError):
    """Invalid or unreadable scenario configuration."""


class EmptyInputError(RisbalError, ValueError):
    """An operation received an empty collection."""


class NormalizationError(RisbalError, ValueError):
    """A matrix with zero norm cannot be normalized (degenerate channel draw)."""


class HermitianViolationError(RisbalError, ValueError):
    """A quadratic form produced a non-negligible imaginary part."""
