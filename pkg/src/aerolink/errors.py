"""Exception types shared across the simulator."""


class AerolinkError(Exception):
    """Base class for all simulator errors."""


class ConfigurationError(AerolinkError):
    """Invalid parameter value, unknown config key, or violated config invariant."""


class GeometryError(AerolinkError):
    """Degenerate geometry (e.g. coincident points in an angle computation)."""


class InfeasibleError(AerolinkError):
    """A scheduling request that cannot be satisfied (e.g. more UAVs than RBs)."""


class PlanningError(AerolinkError):
    """Malformed input to the cooperative-cancellation planner."""


class SimulationError(AerolinkError):
    """Failure while running a sweep, annotated with the sweep point and drop index."""
