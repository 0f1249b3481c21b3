"""
Exception hierarchy shared by the libraries and the workflow entry point.

The entry point maps these onto process exit codes:
ValidationError -> 1, EnumerationLimitError -> 2, VerificationError -> 3.
"""

from typing import Optional


class SupercharacterError(Exception):
    """Base class for every error raised by this project."""


class ValidationError(SupercharacterError, ValueError):
    """Input violates a structural invariant (composition, poset, tableau, field)."""


class EnumerationLimitError(SupercharacterError):
    """An enumeration would exceed its configured budget.

    Attributes:
        limit (int): The configured budget.
        required (Optional[int]): The computed upper bound or the count reached.
    """

    def __init__(self, message: str, limit: int, required: Optional[int] = None):
        super().__init__(message)
        self.limit = limit
        self.required = required


class VerificationError(SupercharacterError):
    """A checked identity failed; `counterexample` holds the offending data in text form."""

    def __init__(self, message: str, counterexample: str = ""):
        super().__init__(message)
        self.counterexample = counterexample


class IntegralityError(VerificationError):
    """A character value that must be a rational integer was not."""
