"""Exception types shared across the simulator."""


class SwarmLinkError(Exception):
    """Base class for all simulator errors."""


class InvalidConfig(SwarmLinkError):
    """A configuration value or combination of values is not usable."""


class InvalidInput(SwarmLinkError):
    """An operation received arguments outside its domain."""


class NoConvergence(SwarmLinkError):
    """An iterative search exhausted its iteration budget."""


class NoRoot(SwarmLinkError):
    """A bracketed root search found no solution inside the bracket."""


class NumericalError(SwarmLinkError):
    """A numerical routine failed or produced inconsistent results."""
