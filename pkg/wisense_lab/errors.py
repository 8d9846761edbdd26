"""Exception hierarchy shared by every module.

Each error carries the process exit code the CLI maps it to and, once it has
crossed a pipeline stage boundary, the name of that stage.
"""

from typing import Optional

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_INTERNAL = 3


class SensingLabError(Exception):
    """Base class for all library errors"""

    exit_code = EXIT_DATA

    def __init__(self, message: str, stage: Optional[str] = None):
        super().__init__(message)
        self.message = message
        self.stage = stage

    def __str__(self) -> str:
        if self.stage:
            return f"[{self.stage}] {self.message}"
        return self.message


class ConfigurationError(SensingLabError, ValueError):
    """Invalid parameters, unreadable config files or schema violations"""

    exit_code = EXIT_USAGE


class DegenerateGeometryError(SensingLabError, ValueError):
    pass


class UndefinedSnrError(SensingLabError, ValueError):
    pass


class UnsupportedChannelizationError(SensingLabError, ValueError):
    pass


class UnknownRuError(SensingLabError, LookupError):
    pass


class InsufficientDataError(SensingLabError, ValueError):
    pass


class InsufficientApertureError(SensingLabError, ValueError):
    pass


class DegenerateDatasetError(SensingLabError, ValueError):
    pass


class ShapeMismatchError(SensingLabError, ValueError):
    pass


class UnsupportedProtocolError(SensingLabError, ValueError):
    pass


class EmptyInputError(SensingLabError, ValueError):
    pass


class UnknownLabelError(SensingLabError, ValueError):
    pass


class InternalError(SensingLabError, RuntimeError):
    """Unexpected failure wrapped with the stage it happened in"""

    exit_code = EXIT_INTERNAL


class CaptureFormatError(SensingLabError, ValueError):
    """Malformed capture or model file; ``field`` names the offending header field"""

    def __init__(self, message: str, field: str):
        super().__init__(f"{message} (field: {field})")
        self.field = field


class BadMagicError(CaptureFormatError):
    pass


class VersionMismatchError(CaptureFormatError):
    pass


class TruncatedPayloadError(CaptureFormatError):
    pass


class PayloadLengthError(CaptureFormatError):
    pass
