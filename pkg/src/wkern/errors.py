"""Exception and warning classes raised by wkern."""


class WkernError(Exception):
    """Base class for all wkern errors."""


class SchemaError(WkernError):
    """Malformed input document (domain, weight, grid)."""


class BadDescriptor(SchemaError):
    pass


class DegenerateCurve(WkernError):
    pass


class TooCloseToBoundary(WkernError):
    pass


class NonPositiveWeight(WkernError):
    pass


class NoSzegoZero(WkernError):
    pass


class MissingSolver(WkernError):
    pass


class BasePointOutside(WkernError):
    pass


class BasePointNearBoundary(WkernError):
    pass


class SingularSystem(WkernError):
    pass


class AssemblyDiagnostic(WkernError):
    pass


class IllConditioned(WkernError):
    pass


class PointOutside(WkernError):
    pass


class ShapeMismatch(WkernError):
    pass


class PoleHit(WkernError):
    pass


class WeightMismatch(WkernError):
    pass


class ReciprocalMismatch(WeightMismatch):
    pass


class NonPositiveDiagonal(WkernError):
    pass


class NotSimplyConnected(WkernError):
    pass


class SzegoZero(WkernError):
    pass


class ZeroOnContour(WkernError):
    pass


class NonIntegerWinding(WkernError):
    pass


class Unresolved(WkernError):
    def __init__(self, message, cell=None):
        super().__init__(message)
        self.cell = cell


class LedgerMismatch(WkernError):
    pass


class SingularGram(WkernError):
    pass


class TrackLost(WkernError):
    pass


class AccuracyWarning(UserWarning):
    """Evaluation point so close to the boundary that quadrature accuracy degrades."""


class GarabedianZero(UserWarning):
    """The Garabedian kernel is (numerically) zero at an evaluation point.

    Not fatal: weighted Garabedian kernels may vanish inside the domain.
    """
