"""Exception hierarchy shared by every lab module."""


class LabError(Exception):
    """Base class for all lab errors."""


class InputError(LabError, ValueError):
    """Malformed or out-of-range input."""


class ImproperFilterError(InputError):
    """A filter base generates a family containing the empty set."""


class PreconditionError(LabError):
    """An operation was called outside its precondition."""


class ResourceLimitError(LabError):
    """A configured size bound would be exceeded."""


class InternalError(LabError, AssertionError):
    """Two independent computations of the same quantity disagree."""
