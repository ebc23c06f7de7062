"""Exception types shared across the package."""


class HypervoteError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(HypervoteError, ValueError):
    """Shapes or sizes of two inputs do not line up."""


class DataError(HypervoteError, ValueError):
    """Input data violates a contract (non-numeric, non-finite, out of range)."""


class EnsembleFormatError(HypervoteError, ValueError):
    """A serialized ensemble file is malformed, corrupted or truncated."""
