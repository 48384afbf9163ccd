"""Exception types shared across the package."""


class ZdownError(Exception):
    """Base class for all errors raised by this package."""


class GraphParseError(ZdownError):
    """A graph or layout document could not be parsed.

    Carries an optional (line, column) position for syntax errors.
    """

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class LayoutError(ZdownError):
    """A layout could not be computed for the given graph/configuration."""


class TransformError(ZdownError):
    """A graph transformation was applied to an unsuitable input."""
