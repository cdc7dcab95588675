"""Exception hierarchy. The CLI maps each class to an exit code."""


class FanFreeError(Exception):
    exit_code = 4


class ParameterError(FanFreeError, ValueError):
    """Invalid arguments: family parameters, tolerances, flags."""

    exit_code = 2


class FormatError(ParameterError):
    """Malformed graph6 input."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"{message} (byte offset {offset})"
        super().__init__(message)
        self.offset = offset


class StructureError(ParameterError):
    """Input graph violates a structural precondition (e.g. connectivity)."""


class MoveError(ParameterError):
    """Illegal edge-rotation move."""


class FeasibilityError(ParameterError):
    """No object satisfies the request (e.g. infeasible edge count)."""


class CapacityError(FanFreeError):
    exit_code = 3


class BudgetError(FanFreeError):
    """Iteration budget exhausted; carries the best result found so far."""

    exit_code = 3

    def __init__(self, message: str, best=None):
        super().__init__(message)
        self.best = best


class InvariantError(FanFreeError, AssertionError):
    """An internal self-check failed. Never expected."""

    exit_code = 4
