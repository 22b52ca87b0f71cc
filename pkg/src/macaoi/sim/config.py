"""Scenario and result containers for the slot-level simulator."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping

from ..channel import ChannelParams
from ..snc import ArrivalEnvelope

INTERFERENCE_MODES = ("persistent", "queue_aware")


@dataclass(frozen=True)
class SimConfig:
    """One fully specified simulation scenario.

    Arrivals are fluid: exactly `arrivals.lam` nats enter the queue every
    slot, plus the burst `arrivals.rho` at slot 0. In persistent mode the
    delay-sensitive source interferes with the sensor in every slot (the
    convention behind the analytical p2); in queue_aware mode only in slots
    where its queue holds data after the slot's arrivals.
    """

    channel: ChannelParams
    arrivals: ArrivalEnvelope
    rate_r: float                 # transmission rate of source 1 [nats/slot]
    q2: float                     # sensor sampling probability per slot
    horizon: int                  # simulated slots
    warmup: int                   # leading slots excluded from all metrics
    seed: int
    interference_mode: str = "persistent"
    delay_thresholds: tuple[int, ...] = (2, 3, 5)   # w values for P{W > w}
    backlog_ceiling: float = 1e9  # nats; exceeding it raises BacklogOverflowError

    def __post_init__(self):
        if not (self.rate_r > 0.0 and math.isfinite(self.rate_r)):
            raise ValueError(f"rate_r must be positive, got {self.rate_r!r}")
        if not 0.0 <= self.q2 <= 1.0:
            raise ValueError(f"q2 must be in [0, 1], got {self.q2!r}")
        if not 0 <= self.warmup < self.horizon:
            raise ValueError(
                f"need horizon > warmup >= 0, got horizon={self.horizon!r}, "
                f"warmup={self.warmup!r}")
        if self.interference_mode not in INTERFERENCE_MODES:
            raise ValueError(
                f"interference_mode must be one of {INTERFERENCE_MODES}, "
                f"got {self.interference_mode!r}")
        if not all(isinstance(w, int) and w >= 0 for w in self.delay_thresholds):
            raise ValueError("delay thresholds must be nonnegative integers")
        if max(self.delay_thresholds, default=0) >= self.horizon - self.warmup:
            raise ValueError("delay thresholds must be smaller than the measured window")
        if not self.backlog_ceiling > 0.0:
            raise ValueError(f"backlog_ceiling must be positive, got {self.backlog_ceiling!r}")

    def with_seed(self, seed: int) -> "SimConfig":
        return replace(self, seed=seed)


@dataclass(frozen=True)
class SimResult:
    """Empirical metrics of one run or of an aggregate of replications.

    ci_halfwidths holds 95% half-widths keyed like the estimates they
    belong to ("delay_violation[2]", "avg_aoi", "avg_backlog"). For a
    single run the age/backlog widths come from batch means; an aggregate
    uses the dispersion across replications.
    """

    delay_violation: Mapping[int, float]  # w -> empirical P{W(t) > w}
    avg_aoi: float                        # time-average age [slots]
    avg_backlog: float                    # time-average backlog [nats]
    max_delay: int                        # largest observed virtual delay [slots]
    ci_halfwidths: Mapping[str, float]
    seed: int
    n_reps: int
    measured_slots: int                   # age/backlog sample count, all reps
    delay_samples: Mapping[int, int]      # w -> denominator of the estimate
    s2_attempts: int
    s2_successes: int
    backend: str

    def to_dict(self) -> dict:
        return {
            "delay_violation": {str(w): p for w, p in sorted(self.delay_violation.items())},
            "avg_aoi": self.avg_aoi,
            "avg_backlog": self.avg_backlog,
            "max_delay": self.max_delay,
            "ci_halfwidths": dict(sorted(self.ci_halfwidths.items())),
            "seed": self.seed,
            "n_reps": self.n_reps,
            "measured_slots": self.measured_slots,
            "delay_samples": {str(w): n for w, n in sorted(self.delay_samples.items())},
            "s2_attempts": self.s2_attempts,
            "s2_successes": self.s2_successes,
            "backend": self.backend,
        }
