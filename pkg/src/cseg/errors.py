"""Exception hierarchy shared by the library and the CLI.

The CLI maps each class to a fixed exit code: ArgumentError -> 2,
ValidationError (and subclasses) -> 1, I/O failures -> 3.
"""


class CsegError(Exception):
    """Base class for all toolkit errors."""


class ArgumentError(CsegError):
    """A caller-supplied value is outside its documented domain."""


class ValidationError(CsegError):
    """Input data violates a documented invariant (bad gold file, etc.)."""


class FormatError(ValidationError):
    """A file does not follow its declared on-disk format."""


class ChecksumError(FormatError):
    """A model file failed CRC verification (truncated or corrupted)."""


class ConfigError(ValidationError):
    """An experiment config or pipeline manifest is inconsistent."""


class AlignmentError(ValidationError):
    """Two supposedly parallel inputs differ in length."""
