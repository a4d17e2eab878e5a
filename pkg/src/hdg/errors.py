"""Exception types shared across the solver suite."""


class HdgError(Exception):
    """Base class for all errors raised by this package."""


class InvalidInput(HdgError):
    """Malformed instance data or generator input."""


class EmptyCoalition(HdgError):
    """A palette was requested for an empty coalition."""


class DimensionMismatch(HdgError):
    """A palette does not match the instance's color count."""


class InvalidOutcome(HdgError):
    """An outcome is not a partition of the agent set."""


class InstanceTooLarge(HdgError):
    """Instance exceeds the configured cap of an exhaustive solver."""


class SearchSpaceTooLarge(HdgError):
    """A solver's branching space exceeds the configured cap."""


class OwnColorViolation(HdgError):
    """A preference order is not expressible over own-color ratios."""


class SolverDivergence(HdgError):
    """A solver produced a witness that fails verification.

    This should never happen; it indicates a bug and is raised loudly
    instead of being silently patched over.
    """
