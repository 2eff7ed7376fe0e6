"""Exception types raised across the package."""


class K2TriplesError(Exception):
    """Base class for all errors raised by k2triples."""


class RangeError(K2TriplesError, IndexError):
    """A position, ID or entity lies outside the valid range."""


class NotFoundError(K2TriplesError, LookupError):
    """A select target or a dictionary term does not exist."""


class InputError(K2TriplesError, ValueError):
    """Malformed input to a builder or query."""


class StateError(K2TriplesError):
    """An operation is not permitted on the given cursor/state."""


class FormatError(K2TriplesError, ValueError):
    """A serialized blob is truncated, corrupt or of the wrong version."""


class ParseError(InputError):
    """An N-Triples statement or query text could not be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class UnsupportedJoinError(InputError):
    """The join shape is outside the supported classes (e.g. class I)."""


class StrategyError(InputError):
    """The requested evaluation strategy is not legal for the join class."""
