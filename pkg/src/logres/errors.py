"""Exception types shared across the package."""


class LogresError(Exception):
    """Base class for all errors raised by logres."""


class DimensionError(LogresError, ValueError):
    """Operands live in ambient spaces of different dimension."""


class InvalidResidueError(LogresError, ValueError):
    """Residue requested along a coordinate where the form is not logarithmic."""


class NotSkewError(LogresError, ValueError):
    """A full matrix was supplied that is not skew-symmetric."""


class DegenerateStructureError(LogresError, ValueError):
    """The coefficient matrix has zero Pfaffian, so the 2-form is degenerate."""


class ModelError(LogresError, ValueError):
    """Invalid model data (bad branch count, index out of range, ...)."""


class ConsistencyError(LogresError, AssertionError):
    """Two independent computations of the same quantity disagree.

    This indicates a bug, never bad input.
    """
