"""Exception hierarchy shared by every module of the package."""


class DadsError(Exception):
    """Base class for all package errors."""


class DomainError(DadsError, ValueError):
    """An argument lies outside the domain of a formula or operation."""


class ConfigurationError(DadsError, ValueError):
    """A scenario, signal or plant description is malformed or inconsistent."""


class ContractError(DadsError, TypeError):
    """A caller handed over an object lacking a required property (e.g. K-infinity)."""


class GainOverflowError(DadsError, ArithmeticError):
    """The dynamic gain z left the admissible range guarded by ``z_max``."""


class SimulationAbort(DadsError, RuntimeError):
    """A runtime guard stopped a simulation.

    The partially recorded trajectory is attached as ``trajectory`` so callers
    can still inspect and export what was computed before the abort.
    """

    def __init__(self, message, trajectory=None, reason="abort"):
        super().__init__(message)
        self.trajectory = trajectory
        self.reason = reason
