"""Exception types shared across the package.

The CLI maps these onto its exit codes: ConfigError -> 2,
NumericalError -> 3, BacklogOverflowError -> 4.
"""


class ConfigError(ValueError):
    """Invalid or incomplete scenario configuration."""


class NumericalError(RuntimeError):
    """A numerical routine failed to produce a usable result."""


class UnstableError(NumericalError):
    """The queueing system is unstable at the requested operating point."""


class BacklogOverflowError(RuntimeError):
    """Simulated backlog exceeded its ceiling; the queue is diverging."""

    def __init__(self, slot: int, backlog: float, ceiling: float):
        self.slot = slot
        self.backlog = backlog
        self.ceiling = ceiling
        super().__init__(
            f"backlog {backlog:.6g} nats exceeded ceiling {ceiling:.6g} "
            f"at slot {slot}; check the stability condition of the scenario"
        )
