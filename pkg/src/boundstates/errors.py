"""Exception types shared across the library."""


class ConfigError(ValueError):
    """Malformed or inconsistent experiment configuration."""


class GridMismatchError(ValueError):
    """Operands sampled on different grids."""


class SolverError(RuntimeError):
    """A numerical routine failed to produce a usable result."""


class NoBoundStateError(SolverError):
    """No bound state exists for the requested parameters."""
