"""Exception types shared across the toolkit."""


class DepseqError(Exception):
    """Base class for all toolkit errors."""


class InvalidGraphError(DepseqError):
    """A graph failed schema validation where a valid one was required."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class UnknownRelationError(DepseqError):
    pass


class MalformedUnitError(DepseqError):
    pass


class WordMismatchError(DepseqError):
    pass


class PositionOutOfRangeError(DepseqError):
    pass


class NotATreeError(DepseqError):
    pass


class MalformedSequenceError(DepseqError):
    """A Prufer sequence with the wrong length or out-of-range parent."""


class NonTreeResultError(DepseqError):
    """Prufer reconstruction did not yield a single well-rooted tree."""


class UnbalancedBracketError(DepseqError):
    pass


class EmptyBracketError(DepseqError):
    pass


class PositionConflictError(DepseqError):
    pass


class LengthMismatchError(DepseqError):
    pass


class MixedKindsError(DepseqError):
    pass


class DuplicateSurfaceError(DepseqError):
    pass


class IncompatibleFormatError(DepseqError):
    pass


class CorpusFormatError(DepseqError):
    """Malformed corpus input; carries the 1-based source line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
