"""Exception types shared across the package."""


class SWNError(Exception):
    """Base class for library errors."""


class DimensionMismatch(SWNError, ValueError):
    """Two functions (or labels within one word) live on different R^d."""


class DomainViolation(SWNError, ValueError):
    """Inputs violate the strict admissibility bound |4 conj(f) g| < 1."""


class NoConvergence(SWNError, RuntimeError):
    """An iterative refinement hit its limit before meeting the tolerance."""


class IncompatibleGrid(SWNError, ValueError):
    """Sampled grids that cannot be nested into one another."""
