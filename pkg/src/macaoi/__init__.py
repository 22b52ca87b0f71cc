"""Delay bounds and age of information for a two-source multiple access channel.

A delay-sensitive source shares a Rayleigh-fading uplink with a sensor
that samples fresh updates with probability q2 per slot; the receiver
can decode both when the SINRs allow. The package pairs closed-form
analysis — Mellin-transform service curves for the queue, renewal
arguments for the sensor's age — with a slot-level Monte Carlo used to
validate every analytical claim.
"""

from .aoi import (InterTxMoments, UpdateProcess, aoi_lower_bound,
                  avg_aoi_closed, avg_aoi_from_interval, avg_aoi_general,
                  geometric_moments, renewal_interval_moments)
from .channel import (ChannelParams, FadingSample, outage_interfered,
                      outage_single, rate_from_threshold, sample_fading,
                      success_prob_s2, threshold_from_rate)
from .errors import (BacklogOverflowError, ConfigError, NumericalError,
                     UnstableError)
from .explore import (OptimizerResult, TradeoffPoint, max_sampling_rate,
                      sweep_tradeoff)
from .presets import make_baseline_channel, make_baseline_config
from .sim import SimConfig, SimResult, replicate, run_simulation
from .snc import (ArrivalEnvelope, BoundResult, OnOffService,
                  RateAdaptService, backlog_bound, delay_violation_bound,
                  finite_horizon_kernel, steady_kernel)
from .special import upper_incomplete_gamma

__version__ = "0.1.0"

__all__ = [
    "ArrivalEnvelope",
    "BacklogOverflowError",
    "BoundResult",
    "ChannelParams",
    "ConfigError",
    "FadingSample",
    "InterTxMoments",
    "NumericalError",
    "OnOffService",
    "OptimizerResult",
    "RateAdaptService",
    "SimConfig",
    "SimResult",
    "TradeoffPoint",
    "UnstableError",
    "UpdateProcess",
    "aoi_lower_bound",
    "avg_aoi_closed",
    "avg_aoi_from_interval",
    "avg_aoi_general",
    "backlog_bound",
    "delay_violation_bound",
    "finite_horizon_kernel",
    "geometric_moments",
    "make_baseline_channel",
    "make_baseline_config",
    "max_sampling_rate",
    "outage_interfered",
    "outage_single",
    "rate_from_threshold",
    "renewal_interval_moments",
    "replicate",
    "run_simulation",
    "sample_fading",
    "steady_kernel",
    "success_prob_s2",
    "sweep_tradeoff",
    "threshold_from_rate",
    "upper_incomplete_gamma",
]
