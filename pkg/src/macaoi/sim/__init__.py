"""Slot-level Monte Carlo of the two-source MAC with a shared fading channel."""

from .backends import default_backend, resolve
from .config import SimConfig, SimResult
from .runner import generate_draws, replicate, run_simulation

__all__ = [
    "SimConfig",
    "SimResult",
    "default_backend",
    "generate_draws",
    "replicate",
    "resolve",
    "run_simulation",
]
