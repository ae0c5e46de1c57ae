"""
Exception hierarchy shared by the model, structure, enumeration and ipm packages.
Every error is a SandpileError; errors about bad input values are also ValueErrors.
"""


class SandpileError(Exception):
    """Base class for all library errors."""


class NotAPartition(SandpileError, ValueError):
    """Raised when a configuration has negative parts or is not non-increasing."""


class RuleNotApplicable(SandpileError, ValueError):
    """Raised when FALL or SLIDE_k is applied where its precondition fails."""


class WeightMismatch(SandpileError, ValueError):
    """Raised when comparing configurations of different weights in dominance order."""


class InvalidConfiguration(SandpileError, ValueError):
    """Raised when a configuration is not reachable in the model an operation requires."""


class NotAReducedForm(SandpileError, ValueError):
    """Raised when a tuple violates the reduced-form characterization."""


class InconsistentStep(SandpileError, ValueError):
    """Raised when a decomposition step cannot be recomposed into a reduced form."""


class InvalidWidth(SandpileError, ValueError):
    """Raised when a staircase width does not fit under the requested weight."""


class CapacityExceeded(SandpileError):
    """Raised when a table or search is asked for more than it was built for."""


class InvalidStep(SandpileError, ValueError):
    """Raised when a generating sequence contains a FALL that cannot be applied."""

    def __init__(self, position: int, index: int):
        super().__init__(f"FALL at column {index} is not applicable (sequence position {position})")
        self.position = position
        self.index = index


class EmptyDomain(SandpileError):
    """Raised when sampling from a set with no elements."""


class PeelUndefined(SandpileError, ValueError):
    """Raised when a peeling step would drive an entry below zero."""


class TrajectoryMismatch(SandpileError, ValueError):
    """Raised when an augmentation target basis does not lead to the given basis."""


class NotExtended(SandpileError, ValueError):
    """Raised when an IPM tuple lacks the distinguished zero of an extended reduced form."""
