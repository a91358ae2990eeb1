"""Exception types shared across the package."""


class H2CensusError(Exception):
    """Base class for errors raised by this package."""


class ValidationError(H2CensusError, ValueError):
    """Input rejected before any computation was attempted."""


class OrbitBudgetError(H2CensusError, RuntimeError):
    """A resource cap was exceeded; distinct from a mathematical failure."""


class ConsistencyError(H2CensusError, RuntimeError):
    """An internal cross-check failed; indicates a bug, never bad input."""
