"""Average Age of Information of the status-update flow, in closed form.

The destination's age resets to one slot on every decoded update and grows
by one per slot otherwise. With sampling probability q2 per slot and
per-attempt success probability p2, the renewal-reward argument gives

    Delta = E[X^2]/(2 E[X]) + 1/2 = 1/(q2 p2),

where X is the inter-reception time. The intermediate moments are exposed
so every link of the derivation chain can be validated independently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class UpdateProcess:
    """Per-slot generation probability q2 and per-attempt success p2."""

    q2: float
    p2: float

    def __post_init__(self):
        if not 0.0 < self.q2 <= 1.0:
            raise ValueError(f"q2 must be in (0, 1], got {self.q2!r}")
        if not 0.0 < self.p2 <= 1.0:
            raise ValueError(f"p2 must be in (0, 1], got {self.p2!r}")


@dataclass(frozen=True)
class InterTxMoments:
    """First two moments of the time T between attempted transmissions."""

    mean_t: float    # E[T] [slots]
    second_t: float  # E[T^2] [slots^2]

    def __post_init__(self):
        if not self.mean_t >= 1.0:
            raise ValueError(f"mean_t must be >= 1 slot, got {self.mean_t!r}")
        if self.second_t < self.mean_t ** 2:
            raise ValueError("second_t violates Jensen: E[T^2] >= E[T]^2")


def geometric_moments(q2: float) -> InterTxMoments:
    """Moments of geometric inter-attempt times: P{T=k} = (1-q2)^(k-1) q2.

    E[T^2] = (2 - q2)/q2^2, spelled as E[T]^2 + Var[T] so the rounded
    result can never dip below E[T]^2 and trip the Jensen validation.
    """
    if not 0.0 < q2 <= 1.0:
        raise ValueError(f"q2 must be in (0, 1], got {q2!r}")
    mean_t = 1.0 / q2
    return InterTxMoments(mean_t=mean_t,
                          second_t=mean_t ** 2 + (1.0 - q2) / q2 ** 2)


def renewal_interval_moments(moments: InterTxMoments, p2: float) -> tuple[float, float]:
    """Moments of the inter-reception time X (a geometric sum of T's).

    E[X] = E[T]/p2 and E[X^2] = E[T^2]/p2 + 2(1-p2) E[T]^2 / p2^2.
    """
    if not 0.0 < p2 <= 1.0:
        raise ValueError(f"p2 must be in (0, 1], got {p2!r}")
    mean_x = moments.mean_t / p2
    second_x = moments.second_t / p2 + 2.0 * (1.0 - p2) * moments.mean_t ** 2 / p2 ** 2
    return mean_x, second_x


def avg_aoi_from_interval(mean_x: float, second_x: float) -> float:
    """Average age from the inter-reception moments: E[X^2]/(2E[X]) + 1/2."""
    if mean_x <= 0.0:
        raise ValueError(f"mean_x must be positive, got {mean_x!r}")
    return second_x / (2.0 * mean_x) + 0.5


def avg_aoi_general(moments: InterTxMoments, p2: float) -> float:
    """Average age for arbitrary inter-attempt moments.

    Delta = E[T^2]/(2 E[T]) + E[T](1-p2)/p2 + 1/2.
    """
    if not 0.0 < p2 <= 1.0:
        raise ValueError(f"p2 must be in (0, 1], got {p2!r}")
    return (moments.second_t / (2.0 * moments.mean_t)
            + moments.mean_t * (1.0 - p2) / p2 + 0.5)


def avg_aoi_closed(proc: UpdateProcess) -> float:
    """Average age for geometric sampling: Delta = 1/(q2 p2) slots."""
    return 1.0 / (proc.q2 * proc.p2)


def aoi_lower_bound(mean_x: float) -> float:
    """Delta >= max(1, (E[X]+1)/2) for any feasible update process."""
    return max(1.0, 0.5 * (mean_x + 1.0))
