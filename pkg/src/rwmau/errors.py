"""Exception types shared across the package."""


class RwmauError(Exception):
    """Base class for all library errors."""


class FormatError(RwmauError):
    """Dataset file is structurally unusable (empty, wrong label count, ...)."""


class ParseError(RwmauError):
    """A cell could not be parsed; carries row/column context in the message."""


class ConfigError(RwmauError):
    """A parameter is outside its valid range for the given data."""


class SplitError(RwmauError):
    """A usable train/test partition could not be drawn."""


class MetricError(RwmauError):
    """A metric is undefined for the given inputs."""
