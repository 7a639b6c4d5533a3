"""Exception types shared across the simulator."""

__all__ = [
    "HapsimError",
    "ConfigError",
    "ConfigSyntaxError",
    "ValidationError",
    "DegenerateGeometryError",
    "OutOfCoverageError",
    "SchedulingError",
    "DomainError",
]


class HapsimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(HapsimError):
    """Invalid or inconsistent configuration."""


class ConfigSyntaxError(ConfigError):
    """Scenario file could not be parsed; carries the offending line number."""

    def __init__(self, message, line_no=None):
        if line_no is not None:
            message = f"line {line_no}: {message}"
        super().__init__(message)
        self.line_no = line_no


class ValidationError(ConfigError):
    """A configuration field holds a value outside its allowed set."""

    def __init__(self, field, message):
        super().__init__(f"{field}: {message}")
        self.field = field


class DegenerateGeometryError(HapsimError):
    """Geometry query on coincident or otherwise degenerate points."""


class OutOfCoverageError(HapsimError):
    """Requested direction or position is not served by any beam."""


class SchedulingError(HapsimError):
    """Link evaluation requested for a terminal that is not scheduled."""


class DomainError(HapsimError):
    """Numeric argument outside the mathematical domain of an operation."""
