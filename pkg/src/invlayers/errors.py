"""Shared exception types.

Validation problems raise plain ``ValueError`` (or the parse subclasses
below, which carry position information).  Computations that would blow
past a configured cap raise :class:`BudgetError` instead of silently
truncating; callers can retry with a larger budget or switch to a
counting method that does not enumerate.
"""


class BudgetError(Exception):
    """A requested computation exceeds its configured size cap."""


class Graph6ParseError(ValueError):
    """Malformed graph6 input; ``offset`` is the failing byte position."""

    def __init__(self, message: str, offset: int | None = None):
        if offset is not None:
            message = f"byte {offset}: {message}"
        super().__init__(message)
        self.offset = offset


class BasisFileError(ValueError):
    """Malformed basis file; ``record`` is the failing record index."""

    def __init__(self, message: str, record: int | None = None):
        if record is not None:
            message = f"record {record}: {message}"
        super().__init__(message)
        self.record = record
