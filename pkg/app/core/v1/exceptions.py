"""Custom Exceptions for the localization laboratory."""

from typing import Optional


class LabException(Exception):
    """Custom Base Exception."""

    def __init__(self, message: str):
        """Instance Custom Base Exception.

        Args:
            message (str): Message detail exception.
        """
        self.message = message
        super().__init__(self.message)


class ConfigurationException(LabException):
    """Invalid grid, state, potential or analysis parameters."""

    pass


class ShapeException(ConfigurationException):
    """Operands live on different grids or representations."""

    pass


class SchemaException(ConfigurationException):
    """JSON configuration does not match the schema."""

    def __init__(self, message: str, line: Optional[int] = None):
        """Instance Schema Exception.

        Args:
            message (str): Message detail exception.
            line (Optional[int]): 1-based line in the config text, if known.
        """
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DataException(LabException):
    """Input data series cannot be analysed."""

    pass


class NumericalException(LabException):
    """Non-finite values or a failed linear solve."""

    pass


class UnsupportedException(LabException):
    """Requested operation is outside the supported catalog."""

    pass
