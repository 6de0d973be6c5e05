"""Exception hierarchy shared by every layer.

The CLI maps ``UsageError`` (and its subclasses) to exit code 2.
"""


class VGeneraError(Exception):
    pass


class UsageError(VGeneraError, ValueError):
    """Inputs that do not fit an operation's contract (orders, flags, ids)."""


class ValidationError(UsageError):
    """A genus, fibration or config description is malformed."""


class DomainError(VGeneraError, ArithmeticError):
    """A mathematically undefined request, e.g. dividing by a non-unit."""


class InvariantViolation(VGeneraError, RuntimeError):
    """An internal invariant failed; always indicates a bug."""
