"""Exception types shared across the package."""
from __future__ import annotations


class QwarmError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(QwarmError, ValueError):
    """Operand shapes or qubit counts do not match."""


class NormalizationError(QwarmError, ValueError):
    """A state vector that must be normalized is not."""


class FixtureError(QwarmError, ValueError):
    """A molecule fixture file is malformed or fails validation."""


class ConvergenceError(QwarmError, RuntimeError):
    """An iterative procedure failed to converge."""


class DivergenceError(QwarmError, RuntimeError):
    """Training produced a non-finite loss or parameters."""
