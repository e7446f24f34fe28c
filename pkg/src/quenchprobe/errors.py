"""Exception types shared across the package."""


class ValidationError(ValueError):
    """A configuration or argument violates a documented invariant."""


class NumericalConsistencyError(RuntimeError):
    """A numerical self-check failed (e.g. covariance eigenvalue > 1)."""


class DegenerateGroundStateError(ValidationError):
    """Ground-state construction hit a (near-)zero single-particle energy."""


class OracleSizeError(ValidationError):
    """Dense Fock-space oracle requested beyond its size cap."""
