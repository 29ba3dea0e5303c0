"""Exception types shared across the package."""


class SpikesimError(Exception):
    """Base class for package-specific failures."""


class ValidationError(SpikesimError, ValueError):
    """Invalid configuration, spec, or argument combination."""


class SingularShiftError(SpikesimError):
    """Linear solve at a shift too close to the spectrum (residual check failed)."""


class BracketError(SpikesimError):
    """Root bracket does not contain a sign change (no outlier in the bracket)."""
