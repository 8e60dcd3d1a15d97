"""Exception types raised across the package."""


class ErrorGenError(Exception):
    """Base class for all errors raised by errorgen."""


class QubitCountMismatch(ErrorGenError, ValueError):
    pass


class DenseLimitError(ErrorGenError, ValueError):
    pass


class PauliParseError(ErrorGenError, ValueError):
    pass


class NonHermitianError(ErrorGenError, ValueError):
    pass


class SingularMatrixError(ErrorGenError, ValueError):
    pass


class NoRealLogarithmError(ErrorGenError, ArithmeticError):
    """The matrix has no real principal logarithm.

    Typically caused by unpaired eigenvalues on the negative real axis, e.g.
    a gate composed with its target instead of divided by it.
    """


class NonTPGeneratorError(ErrorGenError, ValueError):
    """Input generator has a nonzero top row, so it is not trace preserving."""


class InvalidLabelError(ErrorGenError, ValueError):
    pass


class InvalidModelSpecError(ErrorGenError, ValueError):
    pass


class ChannelParameterError(ErrorGenError, ValueError):
    pass


class FileFormatError(ErrorGenError, ValueError):
    pass
