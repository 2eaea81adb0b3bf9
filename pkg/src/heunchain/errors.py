"""Exception hierarchy.

Every error carries an ``exit_code`` so the command line front end can map
failures onto its documented status codes without a lookup table.
"""


class HeunChainError(Exception):
    exit_code = 1


class ConfigError(HeunChainError, ValueError):
    exit_code = 2


class PhysicsError(HeunChainError, ValueError):
    """Model or ground-state condition that makes the request meaningless."""

    exit_code = 3


class DegenerateGroundStateError(PhysicsError):
    pass


class EmptyGroundStateError(PhysicsError):
    pass


class FullGroundStateError(PhysicsError):
    pass


class NumericalError(HeunChainError, ArithmeticError):
    exit_code = 4


class ConvergenceError(NumericalError):
    """An eigensolver iteration failed."""


class CommutationError(NumericalError):
    """The commutant route cannot be trusted for this input; use the direct path."""


class NonConvergenceError(HeunChainError):
    exit_code = 5

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])
