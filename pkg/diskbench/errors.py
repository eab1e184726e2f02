"""Exception hierarchy for diskbench.

All errors derive from :class:`DiskbenchError`, which is a ``ValueError`` so
callers that only care about bad input can keep catching ``ValueError``.
"""


class DiskbenchError(ValueError):
    """Base class for all diskbench errors."""


class NonFiniteInputError(DiskbenchError):
    """Raised when samples or coefficients contain NaN or infinity."""

    def __init__(self, what: str = "input"):
        super().__init__(f"non-finite {what}")


class DomainError(DiskbenchError):
    """Raised when an argument lies outside an operation's domain."""


class SymbolError(DiskbenchError):
    """Raised for symbols that cannot be projected or parsed."""


class SupportBoundaryError(DiskbenchError):
    """Raised when a transform is evaluated too close to the unit circle."""

    def __init__(self, point: complex):
        super().__init__(
            f"evaluation too close to support boundary: |zeta| = {abs(point):.6g}"
        )
        self.point = point


class BranchTrackingError(DiskbenchError):
    """Raised when continuation of a complex logarithm loses its branch."""

    def __init__(self, detail: str = ""):
        message = "log branch tracking lost"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class ConfigError(DiskbenchError):
    """Raised for invalid experiment configurations."""
