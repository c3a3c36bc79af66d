"""Exception types raised by lretomo."""


class TomographyError(Exception):
    """Base class for all lretomo errors."""


class ShapeMismatch(TomographyError, ValueError):
    pass


class NotHermitian(TomographyError, ValueError):
    pass


class NotUnitTrace(TomographyError, ValueError):
    pass


class DimensionTooLarge(TomographyError, ValueError):
    pass


class OutOfRange(TomographyError, ValueError):
    pass


class SingularGram(TomographyError, ValueError):
    """The measurement set is not informationally complete."""


class InsufficientCopies(TomographyError, ValueError):
    pass


class Unsupported(TomographyError, ValueError):
    pass


class ParseError(TomographyError, ValueError):
    """Malformed serialized input. ``field`` names the offending key when known."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{message} (field: {field!r})")
        self.field = field
