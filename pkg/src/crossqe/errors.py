"""Exception types shared across the toolkit."""


class QEError(Exception):
    """Base class for all toolkit errors."""


class FormatError(QEError):
    """A line of an interchange or tabular file could not be parsed."""

    def __init__(self, reason: str, line: int | None = None):
        self.reason = reason
        self.line = line
        message = reason if line is None else f"line {line}: {reason}"
        super().__init__(message)


class InvariantError(QEError):
    """A record violates one of its structural invariants."""

    def __init__(self, record_id: str, reason: str):
        self.record_id = record_id
        self.reason = reason
        super().__init__(f"record {record_id!r}: {reason}")


class AlignmentError(QEError):
    """Bad word-alignment input: an unparseable token or an out-of-range pair."""


class StatsError(QEError):
    """A correlation is undefined or the score/gold join failed."""
