"""Exception hierarchy shared across the library and the CLI.

The CLI maps these onto exit codes: InputFormatError -> 2 (bad files or
parameters), PreconditionError -> 3 (mathematical structure violated).
"""


class HkError(Exception):
    """Base class for all library errors."""


class InputFormatError(HkError, ValueError):
    """Malformed input: edge lists, vector files, partition files, bad parameters."""


class PreconditionError(HkError, ValueError):
    """A solver precondition does not hold (disconnected graph, singular system, ...)."""


class ConvergenceError(HkError, RuntimeError):
    """Iteration budget exhausted. Carries the best estimate seen so far."""

    def __init__(self, message: str, estimate: float, residual: float, iterations: int):
        super().__init__(message)
        self.estimate = estimate
        self.residual = residual
        self.iterations = iterations
