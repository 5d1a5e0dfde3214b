"""Exception hierarchy shared by all indepcert modules."""


class IndepCertError(Exception):
    """Base class for every error raised by the package."""


class FieldError(IndepCertError, ValueError):
    pass


class InversionOfZero(FieldError, ZeroDivisionError):
    pass


class DimensionMismatch(IndepCertError, ValueError):
    pass


class EvaluationFailure(IndepCertError):
    """A function handle could not be evaluated at a point.

    ``index`` is the (function, point) position when the failure happened
    while building a sample matrix, otherwise ``None``.
    """

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class EmptyPool(IndepCertError, ValueError):
    pass


class PivotIsZero(IndepCertError, ValueError):
    pass


class CombinatorialBlowup(IndepCertError):
    pass


class NotReduced(IndepCertError):
    pass


class SingularMatrix(IndepCertError, ZeroDivisionError):
    pass
