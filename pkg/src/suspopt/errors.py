"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of an operation."""


class ConfigError(ValueError):
    """A configuration value is inconsistent or unsupported."""


class SimulationError(RuntimeError):
    """Time integration produced a non-finite state.

    ``time`` holds the simulation time of the first bad step, when known.
    """

    def __init__(self, message, time=None):
        super().__init__(message)
        self.time = time
