"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI lives in cli.py; library code only raises.
"""


class MvclustError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(MvclustError):
    """Malformed data: wrong shapes, non-finite values, bad label files."""


class ConfigurationError(MvclustError):
    """A parameter outside its documented range or an impossible combination."""


class SolverError(MvclustError):
    """Numerical failure inside the optimization loop."""


class MissingFileError(ValidationError):
    """A file referenced by a manifest does not exist."""


class RaggedRowError(ValidationError):
    """A CSV matrix has rows of different widths."""


class NonNumericCellError(ValidationError):
    """A CSV matrix cell failed to parse as a float."""


class RowCountMismatchError(ValidationError):
    """Views or label files disagree on the number of samples."""
