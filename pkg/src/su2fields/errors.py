"""Exception types raised across the package."""


class SU2FieldsError(Exception):
    """Base class for all package errors."""


class NearZeroError(SU2FieldsError, ValueError):
    """A pair (alpha, beta) is too close to zero to be normalized."""


class InvalidIndexError(SU2FieldsError, ValueError):
    """A half-integer index triple violates l +- m, l +- s in N."""


class BandLimitExceededError(SU2FieldsError, ValueError):
    """A requested degree is above the configured band-limit cap."""


class ExactnessGateFailedError(SU2FieldsError, RuntimeError):
    """A quadrature grid failed its orthonormality self-check."""


class ZeroFieldError(SU2FieldsError, ValueError):
    """Spin measures were requested for a field of zero norm."""


class InvalidSpecError(SU2FieldsError, ValueError):
    """A covariance or generator specification is malformed."""


class NotPSDError(InvalidSpecError):
    """A covariance matrix is not positive semidefinite within tolerance."""
