"""Exception types shared across the package."""


class MinexpError(Exception):
    """Base class for all package-specific errors."""


class RankDeficientError(MinexpError):
    """A matrix expected to have full column rank does not."""


class NumericalFailureError(MinexpError):
    """An iterative numeric procedure exceeded its safety limits."""


class TooLargeError(MinexpError):
    """An exhaustive enumeration would exceed the configured work budget."""


class InvalidDegreeError(ValueError, MinexpError):
    """Left degree incompatible with the right-node count."""


class InvalidEpsilonError(ValueError, MinexpError):
    """Perturbation or expansion parameter outside its valid range."""


class OutOfDomainError(ValueError, MinexpError):
    """Scalar argument outside the mathematical domain of a function."""


class NotConstantColumnSumError(MinexpError):
    """Certification requires constant column sums; the matrix has none."""


class InsufficientZerosError(MinexpError):
    """The measurement vector has fewer zeros than the sparsity model implies."""


class DegenerateSplitError(MinexpError):
    """The zero/nonzero split left no unknowns but a nonzero residual system."""


class FormatError(MinexpError):
    """Malformed matrix file; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ChecksumMismatchError(MinexpError):
    """Matrix file header or column sums disagree with the body."""


class NoFeasibleMuError(MinexpError):
    """No column-fraction ratio satisfies the strong degree inequality."""


class NoFeasibleAlphaError(MinexpError):
    """No sparsity ratio makes the weak-bound exponent negative."""
