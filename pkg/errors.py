"""
Error types shared by the kernel, the frame model, the engine and the CLI

Every error carries an ``exit_code`` so that main.py can map failures to
process exit codes without inspecting messages.
"""
from typing import Optional, Tuple

import numpy as np


class FrameError(Exception):
    """Base class for all g-fusion frame toolkit errors"""

    exit_code = 1


class InputError(FrameError):
    """Raised when user supplied data is malformed or inconsistent"""

    exit_code = 1


class ParseError(InputError):
    """Raised when a frame, vector, matrix or coefficient file cannot be read

    The ``path`` attribute names the offending field, e.g. ``members[0].weight``.
    """

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path


class ValidationError(InputError):
    """Raised when a frame violates one of its structural invariants"""

    def __init__(self, message: str, member: Optional[int] = None, field: Optional[str] = None):
        location = ""
        if member is not None:
            location = f"members[{member}]"
            if field:
                location += f".{field}"
        super().__init__(f"{location}: {message}" if location else message)
        self.member = member
        self.field = field
        self.path = location


class DimensionMismatchError(ValidationError):
    pass


class NonPositiveWeightError(ValidationError):
    pass


class NonOrthonormalSubspaceError(ValidationError):
    pass


class ShapeMismatchError(InputError):
    """Raised when vectors, coefficient families or operators do not fit a frame"""


class IndexOutOfRangeError(InputError):
    pass


class GeneratorSpecError(InputError):
    pass


class NotAFrameError(FrameError):
    """Raised when an operation needs a lower frame bound but the family has none"""

    exit_code = 2

    def __init__(self, lower: float, upper: float, message: Optional[str] = None):
        super().__init__(message or f"family is not a g-fusion frame (A = {lower:.6e}, B = {upper:.6e})")
        self.lower = lower
        self.upper = upper


class ConditioningError(FrameError):
    """Raised when the frame operator is too ill-conditioned to invert"""

    exit_code = 3

    def __init__(self, condition_number: float, limit: float):
        super().__init__(f"frame operator condition number {condition_number:.6e} exceeds {limit:.1e}")
        self.condition_number = condition_number
        self.limit = limit


class FactorizationError(FrameError, np.linalg.LinAlgError):
    """Raised when an SVD or eigendecomposition does not converge"""

    exit_code = 4

    def __init__(self, operation: str, shape: Tuple[int, ...]):
        super().__init__(f"{operation} did not converge for a {shape[0]}x{shape[1]} matrix")
        self.operation = operation
        self.shape = shape


class SingularityError(FrameError, np.linalg.LinAlgError):
    """Raised when an inverse is requested for a numerically singular matrix"""

    exit_code = 3

    def __init__(self, min_eigenvalue: float, max_eigenvalue: float):
        super().__init__(
            f"matrix is numerically singular (min eigenvalue {min_eigenvalue:.6e}, "
            f"max eigenvalue {max_eigenvalue:.6e})"
        )
        self.min_eigenvalue = min_eigenvalue
        self.max_eigenvalue = max_eigenvalue


class GenerationError(FrameError):
    """Raised when random_frame cannot produce a frame within MAX_ATTEMPTS draws"""

    exit_code = 2

    def __init__(self, attempts: int, lower: float, upper: float):
        super().__init__(
            f"no frame after {attempts} attempts (last A = {lower:.6e}, B = {upper:.6e})"
        )
        self.attempts = attempts
        self.lower = lower
        self.upper = upper


class ConsistencyError(FrameError):
    """Raised when two independent computations of the same quantity disagree"""

    exit_code = 4
