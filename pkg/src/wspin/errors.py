"""Exception hierarchy shared by every wspin module.

Each class carries an ``exit_code`` used by the command-line front end:
2 for malformed input, 3 for domain/degeneracy errors, 4 for numeric failures.
"""


class WSpinError(Exception):
    exit_code = 1


class InputError(WSpinError):
    exit_code = 2


class DomainError(WSpinError):
    exit_code = 3


class NumericError(WSpinError):
    exit_code = 4


class PolySyntaxError(InputError):
    """Raised by the parser; ``position`` is the 0-based offset of the fault."""

    def __init__(self, message, text="", position=0):
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")

    def caret(self):
        return f"{self.text}\n{' ' * self.position}^"


class NegativeExponentError(PolySyntaxError):
    pass


class ZeroPolynomialError(InputError):
    pass


class NoWeightSystem(DomainError):
    pass


class NonUniqueWeights(DomainError):
    pass


class WeightOutOfRange(DomainError):
    pass


class RankDeficient(DomainError):
    pass


class BothConstantInVar(DomainError):
    pass


class UnsupportedArity(DomainError):
    pass


class EliminationError(DomainError):
    pass


class DecorationNotInGroup(DomainError):
    pass


class InvalidP(InputError):
    pass


class SpectrumTouched(DomainError):
    pass


class POutOfRange(DomainError):
    pass


class MissingBoundaryValue(InputError):
    pass


class InvalidR(InputError):
    pass


class InvalidRho(InputError):
    pass


class WindowTooSmall(InputError):
    pass


class QuadratureFailure(NumericError):
    pass
