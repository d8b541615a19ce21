"""Exception hierarchy shared by every module."""


class PccError(Exception):
    """Base class for all errors raised by pccsolve."""


class NonFinite(PccError, ValueError):
    pass


class NonSquare(PccError, ValueError):
    pass


class NotHermitian(PccError, ValueError):
    pass


class NotUnitary(PccError, ValueError):
    pass


class NotNormalized(PccError, ValueError):
    pass


class DimensionMismatch(PccError, ValueError):
    pass


class ConvergenceFailure(PccError, ArithmeticError):
    pass


class NumericalFault(PccError, ArithmeticError):
    """A probability left [0, 1] by more than the tolerance allows."""


class ObservableError(PccError, ValueError):
    """An outcome/projector family violates a spectral-family invariant."""


class IncompleteSpan(ObservableError):
    pass


class OverlappingEigenspaces(ObservableError):
    pass


class NotProjector(ObservableError):
    pass


class DuplicateOutcome(ObservableError):
    pass


class SlotOutOfRange(PccError, IndexError):
    pass


class UnknownOutcome(PccError, KeyError):
    def __str__(self):
        # KeyError quotes its argument; keep the message readable.
        return str(self.args[0]) if self.args else ""


class DegenerateCondition(PccError, ValueError):
    """The conditioning event has (numerically) zero probability."""


class NotCommuting(PccError, ValueError):
    pass


class CrossPairNotCommuting(NotCommuting):
    pass


class NotDichotomous(PccError, ValueError):
    pass


class WitnessNotFound(PccError, RuntimeError):
    pass


class ParseError(PccError, ValueError):
    def __init__(self, message, location=None):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


class ValidationError(PccError, ValueError):
    pass
