"""Exception types shared across the package."""


class PrivzoneError(Exception):
    """Base class for all package errors."""


class DimensionError(PrivzoneError, ValueError):
    """Grid or tree dimensions are invalid (empty grid, bad rows/cols)."""


class ParameterError(PrivzoneError, ValueError):
    """An argument is outside its documented domain."""


class DegenerateInputError(PrivzoneError, ValueError):
    """Input carries no usable probability mass (e.g. all-zero weights)."""


class CsvParseError(PrivzoneError, ValueError):
    """A probability CSV is malformed; carries the offending line number."""

    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class DuplicateCellError(PrivzoneError, ValueError):
    """The same (row, col) appears twice in a probability CSV."""


class UnknownIndexError(PrivzoneError, KeyError):
    """An index string does not correspond to any leaf of the coding tree."""


class ConfigError(PrivzoneError, ValueError):
    """An experiment configuration is inconsistent or names unknown methods."""
