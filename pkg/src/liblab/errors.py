"""Exception hierarchy for liberation-lab."""


class LiblabError(Exception):
    """Base class for all library errors."""


class ValidationError(LiblabError, ValueError):
    """An input violates an operation's precondition."""


class ShapeError(ValidationError):
    """An input has the wrong length, shape or ground set."""


class CapacityError(LiblabError, ValueError):
    """A request exceeds an enumeration or size cap."""
