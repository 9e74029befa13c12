"""Exception types raised by the library."""


class PursuitError(Exception):
    """Base class for all library-specific errors."""


class NotPositiveDefinite(PursuitError):
    """A matrix required to be positive definite is not."""


class DimensionMismatch(PursuitError):
    """Array shapes are inconsistent with the requested operation."""


class InvalidIndices(PursuitError):
    """Component indices are out of range, repeated, or unusable."""


class DegeneratePairs(PursuitError):
    """Every pairwise difference is numerically zero with nu = 0."""


class SingularDesign(PursuitError):
    """The least-squares design matrix is rank deficient."""


class InvalidSpec(PursuitError):
    """A generator specification is inconsistent."""


class ParseError(PursuitError):
    """A CSV cell or row could not be parsed."""


class TooFewRows(PursuitError):
    """The input has too few rows (need n > p)."""
