"""Exception hierarchy.

``DomainError`` covers bad inputs and mathematically undefined requests (the
CLI maps it to exit code 2).  ``InvariantViolation`` signals a broken internal
assertion (exit code 3).
"""


class DomainError(ValueError):
    pass


class InvariantViolation(RuntimeError):
    pass


class NonPositiveEntry(DomainError):
    pass


class NotCoprime(DomainError):
    pass


class NoSingularTarget(DomainError):
    pass


class InvalidPuncture(DomainError):
    pass


class InvalidAngles(DomainError):
    pass


class DivisionByZero(DomainError, ZeroDivisionError):
    pass


class InconsistentGluing(InvariantViolation):
    pass


class InternalTrichotomyViolation(InvariantViolation):
    pass


class MapInconsistent(InvariantViolation):
    def __init__(self, message, pair=None):
        super().__init__(message)
        self.pair = pair
