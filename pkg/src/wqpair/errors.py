"""Exception types shared across the package."""


class ConfigurationError(ValueError):
    """Raised when an array configuration or run configuration is invalid."""


class DimensionCapError(RuntimeError):
    """Raised when a dense solve would exceed the configured dimension cap."""


class CertificationError(RuntimeError):
    """Raised when an eigendecomposition fails its residual certificate.

    Carries the index of the worst offending eigenpair.
    """

    def __init__(self, msg: str, index: int):
        super().__init__(msg)
        self.index = index


class PoleError(ValueError):
    """Raised when a closed-form expression is evaluated at a singularity."""
