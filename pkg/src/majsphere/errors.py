"""Exception types shared across the package."""


class MajsphereError(Exception):
    """Base class for package errors."""


class ConfigError(MajsphereError):
    """Invalid drive/run configuration (CLI exit code 2)."""


class IntegrationInstabilityError(MajsphereError):
    """Norm or trace drift exceeded the stability threshold (CLI exit code 3)."""


class TomographyConditioningError(MajsphereError):
    """Input-state Gram matrix too ill-conditioned for linear inversion."""


class BasisMismatchError(MajsphereError):
    """Process matrices expressed in different operator bases."""


class PositivityWarning(UserWarning):
    """Density matrix developed an eigenvalue below the positivity tolerance."""
