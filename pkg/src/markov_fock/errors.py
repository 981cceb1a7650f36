"""
Error Types for markov-fock

Every failure the library raises derives from MarkovFockError, so callers
(the CLI, the MCP tools) can map each family to its own exit code or
error payload.
"""


class MarkovFockError(Exception):
    """Base class for all markov-fock errors."""


class DomainError(MarkovFockError, ValueError):
    """An input violates the precondition of an operation."""


class PrecisionError(MarkovFockError, ArithmeticError):
    """A certified result could not be obtained within the precision budget."""


class DigitBudgetExceeded(PrecisionError):
    """A tree value outgrew the configured number of decimal digits."""

    def __init__(self, message: str, digits: int):
        super().__init__(message)
        self.digits = digits


class ConvexityViolation(MarkovFockError, AssertionError):
    """A certified comparison contradicts the convexity of psi."""
