"""Exception types raised by the burafrac library."""


class BurafracError(Exception):
    """Base class for all library errors."""


class NonConvergence(BurafracError):
    """Remez exchange stalled before reaching the equioscillation tolerance."""

    def __init__(self, message, last_spread=None):
        super().__init__(message)
        self.last_spread = last_spread


class PrecisionExhausted(BurafracError):
    """Working precision is insufficient for the requested degrees."""


class PoleHit(BurafracError):
    """Evaluation point coincides with a pole within machine tolerance."""


class ComplexPoles(BurafracError):
    """Denominator has complex roots; real partial fractions do not apply."""


class RepeatedPoles(BurafracError):
    """Denominator has (numerically) repeated roots."""


class WrongExtremaCount(BurafracError):
    """Error curve does not show the expected number of alternation points."""


class NotSymmetric(BurafracError):
    """Operation requires a symmetric matrix."""


class Singular(BurafracError):
    """Matrix is singular to working precision."""


class NotPositiveDefinite(BurafracError):
    """Matrix is not positive definite."""


class ShiftNotSpd(BurafracError):
    """Shifted matrix A - d*I is not symmetric positive definite."""


class CgDivergence(BurafracError):
    """Conjugate gradient failed to reach the requested tolerance."""


class DimensionTooLarge(BurafracError):
    """Problem size exceeds the configured dense-processing cap."""
