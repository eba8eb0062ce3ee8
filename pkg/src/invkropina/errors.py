"""Exception hierarchy."""


class KropinaError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(KropinaError, ValueError):
    pass


class StructureError(KropinaError, ValueError):
    """Malformed algebraic input (antisymmetry, shapes, non-finite data)."""


class ValidationError(KropinaError):
    """A structural validator failed; carries the offending report."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class OffSubspaceError(KropinaError, ValueError):
    """A vector that must lie in m has h-components above tolerance."""


class DegenerateDirection(KropinaError, ValueError):
    """beta(y) = <y, X> is too small for the Kropina metric to be defined."""

    def __init__(self, message, beta=None, threshold=None):
        super().__init__(message)
        self.beta = beta
        self.threshold = threshold


class DegenerateFlag(KropinaError, ValueError):
    """The two flag vectors are numerically linearly dependent."""

    def __init__(self, message, value=None, threshold=None):
        super().__init__(message)
        self.value = value
        self.threshold = threshold


class ModelFileError(KropinaError, ValueError):
    """Parse error in a model file, located by line or by field path."""

    def __init__(self, message, location=None):
        full = f"{location}: {message}" if location else message
        super().__init__(full)
        self.location = location


class UnsupportedModel(KropinaError, ValueError):
    """Operation not defined for this kind of model (e.g. Koszul with nontrivial h)."""
