"""Exception types shared across the package."""


class NlMimoError(Exception):
    """Base class for all package-specific errors."""


class RankDeficient(NlMimoError):
    """Matrix is (numerically) rank deficient for the requested operation."""


class NotPositiveDefinite(NlMimoError):
    """Hermitian solve hit a non-positive pivot."""


class DimensionMismatch(NlMimoError):
    """Operands have incompatible shapes."""


class LengthMismatch(NlMimoError):
    """Bit sequence length does not divide into symbols."""


class UnsupportedRate(NlMimoError):
    """Code rate outside the supported puncturing set."""


class CalibrationDiverged(NlMimoError):
    """Threshold calibration never crossed the target BLER in the search range."""


class InsufficientPilots(NlMimoError):
    """Too few pilot LLRs to estimate link quality."""


class ConfigError(NlMimoError):
    """Simulation configuration failed validation."""
