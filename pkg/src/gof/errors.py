"""Exception types shared across the package."""


class GofError(Exception):
    """Base class for all errors raised by this package."""


class InputError(GofError):
    """An argument violates a documented precondition."""


class UnsupportedSizeError(GofError):
    """The requested computation exceeds a documented size limit."""


class GraphParseError(GofError):
    """A graph file could not be parsed.

    Carries the 1-based line number at which parsing failed, when known.
    """

    def __init__(self, message: str, line: int | None = None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class DegenerateGraphError(GofError):
    """The observed graph is empty or complete, so the edge-density
    estimate is 0 or 1 and every test statistic degenerates."""


class CalibrationError(GofError):
    """Root finding for the intercept of a link-based model failed."""
