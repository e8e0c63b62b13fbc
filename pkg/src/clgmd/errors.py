"""Exception taxonomy shared across the package.

The CLI maps these onto exit codes: usage/config problems exit 1,
OS-level I/O failures exit 2, malformed data exits 3.
"""


class ClgmdError(Exception):
    """Base class for all package errors."""


class InputError(ClgmdError, ValueError):
    """An operation was called with arguments violating its contract."""


class ConfigError(ClgmdError, ValueError):
    """A parameter set or configuration file is invalid."""


class DataError(ClgmdError, ValueError):
    """External data (frame files, sequences) is malformed."""


class UsageError(ClgmdError):
    """Command line invocation is malformed."""
