"""Exception hierarchy shared by the library and the CLI exit-code mapping."""


class L2InvError(Exception):
    """Base class for all library errors."""


class GroupMismatchError(L2InvError, ValueError):
    """Operands live over different groups."""


class UnsupportedGroupError(L2InvError, TypeError):
    """The requested operation is not available for this group variant."""


class ShapeError(L2InvError, ValueError):
    """Matrix or complex shapes do not fit together."""


class InvalidGroupError(L2InvError, ValueError):
    """A group description violates the group axioms or its declared shape."""


class ParseError(L2InvError, ValueError):
    """Malformed JSON input; ``field`` names the offending location."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
