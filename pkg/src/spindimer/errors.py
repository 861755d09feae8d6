"""Exception types raised across the package."""


class InvalidInputError(ValueError):
    """An argument is outside the domain an operation accepts."""


class UnphysicalInputError(InvalidInputError):
    """A susceptibility maps to a normalized moment outside [0, 4/3]."""


class CurveParseError(InvalidInputError):
    """A susceptibility file could not be parsed.

    Attributes
    ----------
    lineno : int or None
        1-based line number of the offending row, when known.
    """

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)


class AmbiguousBracketError(InvalidInputError):
    """A root bracket contains more than one sign change."""
