"""Exceptions raised by qfibound.

Input errors also derive from ValueError and numerical ones from
ArithmeticError, so callers that only know the builtin types still catch them.
"""


class QfiboundError(Exception):
    pass


class NonHermitianInput(QfiboundError, ValueError):
    pass


class NegativeSpectrum(QfiboundError, ArithmeticError):
    pass


class PurityOutOfRange(QfiboundError, ValueError):
    pass


class SpectrumInvalid(QfiboundError, ValueError):
    pass


class ParamLengthMismatch(QfiboundError, ValueError):
    pass


class DimMismatch(QfiboundError, ValueError):
    pass


class NonRotationSlot(QfiboundError, ValueError):
    pass


class MOutOfRange(QfiboundError, ValueError):
    pass


class NonPSDTMatrix(QfiboundError, ArithmeticError):
    pass


class NumericalInconsistency(QfiboundError, ArithmeticError):
    pass


class DegenerateLowSpectrum(QfiboundError, ValueError):
    pass


class ZeroDelta(QfiboundError, ValueError):
    pass


class ObjectiveEvaluationFailure(QfiboundError, RuntimeError):
    def __init__(self, message, restart_index=None):
        if restart_index is not None:
            message = 'restart %d: %s' % (restart_index, message)
        super().__init__(message)
        self.restart_index = restart_index


class ConfigError(QfiboundError, ValueError):
    pass


class BoundViolation(QfiboundError, ArithmeticError):
    pass


class MalformedCSV(QfiboundError, ValueError):
    pass
