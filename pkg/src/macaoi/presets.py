"""Baseline scenario used by the examples, tests, and benchmark.

A symmetric cell-edge deployment: both sources 80 m out at 10 mW over a
path-loss-4 channel into -80 dBm receiver noise, giving each link an
average received SNR of ~24 dB. Source 1 signals at R = ln 5 nats/slot
(SINR threshold 4); the sensor's updates are short enough to decode at
threshold 0.5. Arrivals fill half the on-state service (lambda = 0.5
nats/slot against R(1 - beta) ~ 0.6-1.3 depending on q2) with a
half-slot burst allowance.
"""

from __future__ import annotations

from .channel import ChannelParams
from .sim import SimConfig
from .snc import ArrivalEnvelope

P1_WATTS = 0.01
P2_WATTS = 0.01
R1_METERS = 80.0
R2_METERS = 80.0
PATH_LOSS_EXPONENT = 4.0
SIGMA2_WATTS = 1e-11
GAMMA1_LINEAR = 4.0          # R = ln 5 ~ 1.609 nats/slot
GAMMA2_LINEAR = 0.5
LAMBDA_NATS_PER_SLOT = 0.5
RHO_NATS = 0.5
Q2_DEFAULT = 0.2
SEED_DEFAULT = 1729


def make_baseline_channel() -> ChannelParams:
    return ChannelParams(
        p1=P1_WATTS, p2=P2_WATTS,
        r1=R1_METERS, r2=R2_METERS,
        theta=PATH_LOSS_EXPONENT,
        sigma2=SIGMA2_WATTS,
        gamma1=GAMMA1_LINEAR, gamma2=GAMMA2_LINEAR,
    )


def make_baseline_config(q2: float = Q2_DEFAULT,
                         horizon: int = 1_000_000,
                         warmup: int | None = None,
                         seed: int = SEED_DEFAULT,
                         **overrides) -> SimConfig:
    """Baseline SimConfig; warmup defaults to 10% of the horizon."""
    if warmup is None:
        warmup = horizon // 10
    channel = overrides.pop("channel", make_baseline_channel())
    arrivals = overrides.pop(
        "arrivals", ArrivalEnvelope(rho=RHO_NATS, lam=LAMBDA_NATS_PER_SLOT))
    rate_r = overrides.pop("rate_r", channel.rate1)
    return SimConfig(
        channel=channel,
        arrivals=arrivals,
        rate_r=rate_r,
        q2=q2,
        horizon=horizon,
        warmup=warmup,
        seed=seed,
        **overrides,
    )
