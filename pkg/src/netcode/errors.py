"""Exception hierarchy shared by every module of the package."""


class NetcodeError(Exception):
    """Base class for all package errors."""


class ParseError(NetcodeError):
    """Malformed text input (matrix files, channel tables, descriptors)."""


class DimensionError(NetcodeError):
    """Operands have incompatible shapes or ambient spaces."""


class NonPrimeCharacteristic(NetcodeError):
    pass


class ReducibleModulus(NetcodeError):
    pass


class FieldTooLarge(NetcodeError):
    pass


class FieldMismatch(NetcodeError):
    pass


class DivisionByZero(NetcodeError, ZeroDivisionError):
    pass


class ShapeMismatch(DimensionError):
    pass


class AmbientMismatch(DimensionError):
    pass


class SplitOutOfRange(NetcodeError):
    pass


class EnumerationBudgetExceeded(NetcodeError):
    pass


class UnknownInput(NetcodeError):
    pass


class IdenticalInputs(NetcodeError):
    pass


class SingletonCode(NetcodeError):
    pass


class CodeNotTCorrecting(NetcodeError):
    pass


class NoFiniteCandidate(NetcodeError):
    pass


class InvalidL(NetcodeError):
    pass


class InvalidParameters(NetcodeError):
    pass


class InvalidD(NetcodeError):
    pass


class UnreachablePair(NetcodeError):
    pass


class NoInstanceFound(NetcodeError):
    pass
