"""Exception types shared across the toolkit."""


class KbootError(Exception):
    """Base class for all toolkit errors."""


class DimensionError(KbootError, ValueError):
    """Array has the wrong rank, shape, or mismatched sizes."""


class ParameterError(KbootError, ValueError):
    """Parameter outside its documented range."""


class BudgetError(ParameterError):
    """Sampling budget cannot satisfy the requested constraints."""


class FormatError(KbootError, ValueError):
    """Malformed file content; message names the byte offset."""
