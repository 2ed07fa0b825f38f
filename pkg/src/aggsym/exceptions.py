"""Exception hierarchy shared by every module of the package."""


class AggsymError(Exception):
    """Base class for all errors raised by aggsym."""


class StructuralError(AggsymError, KeyError):
    """A symbol id does not exist in the alphabet, or an aggregate is malformed."""

    def __str__(self):
        return Exception.__str__(self)


class DomainError(AggsymError, ValueError):
    """A numeric precondition of a code-length or gain formula is violated."""


class AlphabetError(AggsymError, ValueError):
    """Input bytes fall outside the declared base alphabet."""

    def __init__(self, message, position=None, byte=None):
        super().__init__(message)
        self.position = position
        self.byte = byte


class CapacityError(AggsymError, ValueError):
    """A header field cannot hold the requested value."""


class FormatError(AggsymError, ValueError):
    """A container, header or payload is malformed, truncated or corrupt."""
