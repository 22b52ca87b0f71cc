"""Rayleigh block-fading link model for the two-user multiple access channel.

Power received from source i is P_i |h_i|^2 r_i^-theta with |h_i|^2 a
unit-mean exponential (Rayleigh magnitude squared). The closed forms below
follow from the exponential MGF: for g ~ Exp(1), E[exp(-t g)] = 1/(1+t).

All powers are linear watts, distances in meters, rates in nats per slot.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def threshold_from_rate(rate: float) -> float:
    """SINR decoding threshold for a fixed transmission rate R nats/slot."""
    return math.expm1(rate)


def rate_from_threshold(gamma: float) -> float:
    """Transmission rate R nats/slot that a SINR threshold corresponds to."""
    return math.log1p(gamma)


@dataclass(frozen=True)
class ChannelParams:
    """Physical-layer configuration of both links to the destination."""

    p1: float      # transmit power of the delay-sensitive source [W]
    p2: float      # transmit power of the status-update source [W]
    r1: float      # distance source 1 -> destination [m]
    r2: float      # distance source 2 -> destination [m]
    theta: float   # path-loss exponent
    sigma2: float  # noise variance at the destination [W]
    gamma1: float  # SINR decoding threshold of source 1 (linear)
    gamma2: float  # SINR decoding threshold of source 2 (linear)

    def __post_init__(self):
        for name in ("p1", "p2", "r1", "r2", "theta", "sigma2"):
            value = getattr(self, name)
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        for name in ("gamma1", "gamma2"):
            value = getattr(self, name)
            if not (value >= 0.0 and math.isfinite(value)):
                raise ValueError(f"{name} must be nonnegative, got {value!r}")

    @property
    def rate1(self) -> float:
        """Rate R nats/slot matching the gamma1 threshold."""
        return rate_from_threshold(self.gamma1)

    @property
    def mean_gain1(self) -> float:
        """Average received SNR of link 1: P1 r1^-theta / sigma2."""
        return self.p1 * self.r1 ** -self.theta / self.sigma2


@dataclass(frozen=True)
class FadingSample:
    """One slot of squared fading magnitudes |h_1|^2, |h_2|^2."""

    g1: float
    g2: float

    def __post_init__(self):
        if self.g1 < 0.0 or self.g2 < 0.0:
            raise ValueError("squared fading magnitudes must be nonnegative")


def outage_single(params: ChannelParams) -> float:
    """P{log(1+SNR_1) < R}: source-1 outage with the sensor silent.

    Equals 1 - exp(-gamma1 sigma2 r1^theta / P1).
    """
    x = params.gamma1 * params.sigma2 * params.r1 ** params.theta / params.p1
    return -math.expm1(-x)


def outage_interfered(params: ChannelParams) -> float:
    """P{log(1+SINR_1) < R}: source-1 outage while the sensor transmits.

    Equals 1 - exp(-gamma1 sigma2 r1^theta / P1) / (1 + gamma1 (P2/P1)(r1/r2)^theta);
    averaging the interferer's exponential fading contributes the denominator.
    """
    x = params.gamma1 * params.sigma2 * params.r1 ** params.theta / params.p1
    denom = 1.0 + params.gamma1 * (params.p2 / params.p1) * (params.r1 / params.r2) ** params.theta
    return 1.0 - math.exp(-x) / denom


def success_prob_s2(params: ChannelParams) -> float:
    """P{SINR_2 >= gamma2}: sensor update decoded under persistent interference.

    Equals exp(-gamma2 sigma2 r2^theta / P2) / (1 + gamma2 (P1/P2)(r2/r1)^theta).
    Source 1 is assumed to be transmitting in every slot; the queue-aware
    alternative is only available empirically through the simulator.
    """
    x = params.gamma2 * params.sigma2 * params.r2 ** params.theta / params.p2
    denom = 1.0 + params.gamma2 * (params.p1 / params.p2) * (params.r2 / params.r1) ** params.theta
    return math.exp(-x) / denom


def sample_fading(rng: np.random.Generator) -> FadingSample:
    """Draw one slot of independent unit-mean exponential fading gains."""
    g = rng.standard_exponential(2)
    return FadingSample(g1=float(g[0]), g2=float(g[1]))
