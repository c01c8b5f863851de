"""Exception hierarchy shared by every module."""


class DrinfeldError(Exception):
    """Base class for all errors raised by the package."""


class NonPrimeCharacteristic(DrinfeldError):
    pass


class ReducibleModulus(DrinfeldError):
    pass


class EvenCharacteristic(DrinfeldError):
    pass


class OddCharacteristic(DrinfeldError):
    pass


class ZeroPolynomial(DrinfeldError):
    pass


class NotIrreducible(DrinfeldError):
    pass


class NotMonic(DrinfeldError):
    pass


class NotDegreeTwo(DrinfeldError):
    pass


class InseparableModel(DrinfeldError):
    pass


class NegativeGenus(DrinfeldError):
    pass


class NotImaginary(DrinfeldError):
    pass


class NonIntegralZeta(DrinfeldError):
    pass


class CapExceeded(DrinfeldError):
    pass


class WrongDegree(DrinfeldError):
    pass


class RangeViolation(DrinfeldError):
    pass


class DimensionAtLeastP(DrinfeldError):
    pass


class InsufficientTerms(DrinfeldError):
    pass


class ParseError(DrinfeldError, ValueError):
    pass


class InvalidModulus(DrinfeldError, ValueError):
    pass


class SymmetryMismatch(DrinfeldError):
    pass
