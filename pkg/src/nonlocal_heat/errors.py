"""Exception types shared across the library."""


class DomainError(ValueError):
    """Arguments outside an operation's domain (bad radius, non-unit vector, ...)."""


class IntegrabilityError(DomainError):
    """Requested integral provably diverges for the given parameters."""


class UnsupportedConfigurationError(DomainError):
    """Configuration is valid mathematically but outside what this library supports."""


class NumericError(RuntimeError):
    """A numerical routine failed to reach its tolerance.

    Carries optional diagnostics: the partial result and an error estimate.
    """

    def __init__(self, message, partial=None, error_estimate=None):
        super().__init__(message)
        self.partial = partial
        self.error_estimate = error_estimate


class ResourceLimitError(RuntimeError):
    """A computation exceeded its configured budget (atom count, series length)."""
