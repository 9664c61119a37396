"""
Moment Lab - Error Hierarchy

Every failure raised by the library derives from MomentLabError and carries
the process exit code the CLI reports for it:
- 2: usage or input errors
- 3: numeric failures
"""

from typing import Optional


EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3


class MomentLabError(Exception):
    """Base class for all library errors"""

    exit_code = EXIT_NUMERIC

    def __init__(self, message: str, detail: Optional[dict] = None):
        super().__init__(message)
        self.detail = detail or {}


class InvalidInputError(MomentLabError):
    """Malformed or out-of-domain input data"""

    exit_code = EXIT_USAGE


class InvalidDensityError(InvalidInputError):
    """A density evaluator produced a negative value"""


class InvalidObservableError(InvalidInputError):
    """An element that must be Hermitian is not"""


class IncompleteFamilyError(InvalidInputError):
    """A combination table refers to labels the family does not contain"""


class NumericError(MomentLabError):
    """Numerical procedure failed"""


class RankDeficiencyError(NumericError):
    """A Hankel block is not strictly positive definite"""

    def __init__(self, message: str, order: int, detail: Optional[dict] = None):
        super().__init__(message, detail)
        self.order = order


class ConditioningError(NumericError):
    """A linear system is singular or too ill-conditioned to trust"""


class UnderdeterminedError(NumericError):
    """Probe vectors do not span the Hilbert space"""


class PositivityError(NumericError):
    """An effect has eigenvalues below the positivity tolerance"""


class TruncationError(NumericError):
    """Fock truncation is below the degree of the element"""


class InfeasibleSequenceError(NumericError):
    """A determinacy test was asked about a sequence no measure realizes"""
