"""Exception types raised by the extractor."""


class ExtractError(Exception):
    """Base class for all extractor errors."""


class ModelError(ExtractError):
    """The model could not be loaded or the settings do not fit it."""


class SequenceError(ExtractError):
    """A single token sequence cannot be processed (empty or over length)."""


class InputError(ExtractError):
    """A problem with one of the input text files.

    Carries the 1-based line number when the problem is tied to a line.
    """

    def __init__(self, reason: str, line: int | None = None):
        self.reason = reason
        self.line = line
        message = reason if line is None else f"line {line}: {reason}"
        super().__init__(message)
