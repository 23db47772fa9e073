"""Exception hierarchy shared across the package."""


class ElskeError(Exception):
    """Base class for all errors raised by this package."""


class IngestionError(ElskeError):
    """Raised when input text cannot be turned into a usable corpus."""


class IndexFormatError(ElskeError):
    """Raised when a persisted reference index cannot be decoded."""


class DatasetError(ElskeError):
    """Raised when a benchmark dataset directory has an unknown layout."""
