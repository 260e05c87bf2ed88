class GeoColumnError(Exception):
    """Base class for every error raised by the library"""


class GeometryError(GeoColumnError):
    """A geometry violates a structural invariant"""


class FormatError(GeoColumnError):
    """Unsupported or unknown format element (magic, version, code, width)"""


class CorruptionError(GeoColumnError):
    """Stored bytes do not decode to what their metadata promises"""


class ParseError(GeoColumnError):
    """Malformed WKT or GeoJSON input"""

    def __init__(self, message: str, position=None):
        self.position = position
        if position is not None:
            message = f"{message} (at {position})"
        super().__init__(message)


class ConfigError(GeoColumnError):
    """Invalid configuration value"""
