"""Exception hierarchy shared by the parser, the engine and the explorer."""


class DeccspError(Exception):
    """Base class for every error raised by this package."""


class ParseError(DeccspError):
    """Lexical or syntactic error, with a 1-based source position."""

    def __init__(self, message, line=None, column=None):
        self.message = message
        self.line = line
        self.column = column
        if line is not None:
            message = f"{line}:{column}: {message}"
        super().__init__(message)


class StaticError(ParseError):
    """A model parsed but failed a well-formedness check."""


class UnresolvedName(StaticError):
    pass


class FreshnessViolation(StaticError):
    pass


class SyncSetError(StaticError):
    """An event set (sync, hiding) names a terminal event or tau."""


class SemanticError(DeccspError):
    """Raised while computing transitions. ``path`` is filled in by the explorer."""

    path = None


class UnboundDataVariable(SemanticError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"data variable {name!r} is not bound in the local store")


class UnboundProcessVariable(SemanticError):
    def __init__(self, name):
        self.name = name
        super().__init__(f"process variable {name!r} has no value in the global store")


class DivisionByZero(SemanticError):
    def __init__(self):
        super().__init__("integer division by zero")


class UnsynchronizedInputWithoutDomain(SemanticError):
    def __init__(self, channel):
        self.channel = channel
        super().__init__(
            f"input on channel {channel} fires unsynchronised but the channel has no declared domain"
        )


class EnumerationLimitExceeded(SemanticError):
    def __init__(self, channel, size, limit):
        super().__init__(
            f"channel {channel} would enumerate {size} values (limit {limit})"
        )


class NoMatchingPath(DeccspError):
    """A fault-path selector matched no path within the exploration bounds."""
