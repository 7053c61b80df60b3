"""Exception types shared across the simulator."""


class SimulationError(Exception):
    """Base class for all simulator errors."""


class BoundaryViolation(SimulationError):
    """A position left the operating area."""


class ConstraintViolation(SimulationError):
    """A box bound or one-hot constraint of the joint problem is broken."""


class EmptyProblem(SimulationError):
    """An operation was invoked with nothing to work on."""


class EncodingError(SimulationError):
    """A particle or chromosome vector has the wrong layout."""


class NoLink(SimulationError):
    """A transmission was attempted without any allocated channel."""


class InstanceTooLarge(SimulationError):
    """The exhaustive solver refused an instance it cannot enumerate."""


class PlanningFailure(SimulationError):
    """No obstacle-free path connects start and goal."""


class GenerationFailure(SimulationError):
    """Obstacle sampling could not produce a connected world."""


class ConfigError(SimulationError):
    """Bad configuration file, key, or value."""
