"""Exception and warning types raised across the package."""


class SynclimitsError(Exception):
    """Base class for all package errors."""


class ModelInconsistent(SynclimitsError):
    """A cyclic spectrum model produced a non-Hermitian PSD matrix."""


class NonFiniteIntegrand(SynclimitsError, FloatingPointError):
    pass


class EigensolveFailure(SynclimitsError):
    pass


class SingularMatrix(SynclimitsError):
    pass


class TruncationError(SynclimitsError):
    """Pulse energy outside the retained taps exceeds the allowed tail."""


class LengthMismatch(SynclimitsError, ValueError):
    pass


class UnsupportedDelay(SynclimitsError, ValueError):
    pass


class NotPositiveDefinite(SynclimitsError):
    pass


class InsufficientData(SynclimitsError, ValueError):
    pass


class SingularSpectrumWarning(RuntimeWarning):
    """The log-determinant integrand hit a zero eigenvalue (deterministic process)."""
