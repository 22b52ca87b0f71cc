"""Delay/age tradeoff sweeps and the maximum-sampling-rate optimizer.

Both tools view the sensor's sampling probability q2 as the knob: raising
it refreshes the monitor faster (age ~ 1/(q2 p2)) but degrades source 1's
effective service (beta grows affinely in q2), inflating the delay bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

import numpy as np

from .aoi import UpdateProcess, avg_aoi_closed
from .channel import success_prob_s2
from .errors import BacklogOverflowError, NumericalError
from .optimize import bisect_threshold
from .sim import SimConfig, replicate
from .snc import OnOffService, delay_violation_bound

SWEEP_COLUMNS = ("q2", "w", "p1", "pv_bound", "pv_empirical",
                 "aoi_analytic", "aoi_empirical", "stable")

_MONO_GRID = 11      # coarse q2 grid guarding the bisection premise
_MONO_SLACK = 1e-9


@dataclass(frozen=True)
class TradeoffPoint:
    """One sweep row; `error` is diagnostic only and never exported."""

    q2: float
    w: int
    p1: float
    pv_bound: float
    pv_empirical: float    # NaN unless simulated
    aoi_analytic: float
    aoi_empirical: float   # NaN unless simulated
    stable: bool
    error: str | None = None

    def as_row(self) -> tuple:
        return tuple(getattr(self, c) for c in SWEEP_COLUMNS)


@dataclass(frozen=True)
class OptimizerResult:
    q2_max: float       # largest feasible sampling probability (NaN if none)
    aoi_at_max: float   # analytic average age at q2_max
    feasible: bool
    iterations: int     # bisection steps taken


def _analytic_aoi(q2: float, p2: float) -> float:
    if q2 <= 0.0 or p2 <= 0.0:
        return math.inf
    return avg_aoi_closed(UpdateProcess(q2=q2, p2=p2))


def sweep_tradeoff(base: SimConfig,
                   q2_values: Sequence[float],
                   w_values: Sequence[int],
                   p1_values: Sequence[float] | None = None,
                   with_sim: bool = False,
                   n_reps: int = 1,
                   backend: str | None = None) -> list[TradeoffPoint]:
    """Evaluate the tradeoff over the product grid q2 x w x p1.

    Rows come out in that nesting order. One simulation per (q2, p1) pair
    covers every w (the thresholds share a trajectory); a run whose queue
    overflows — the expected outcome for unstable operating points — is
    recorded in the rows' `error` field instead of aborting the sweep.
    """
    if p1_values is None:
        p1_values = [base.channel.p1]
    w_list = [int(w) for w in w_values]

    sims: dict[tuple[float, float], tuple] = {}  # (q2, p1) -> (result, error)
    rows = []
    for q2 in q2_values:
        for w in w_list:
            for p1 in p1_values:
                channel = replace(base.channel, p1=p1)
                service = OnOffService.from_channel(channel, q2, base.rate_r)
                bound = delay_violation_bound(base.arrivals, service, w)
                aoi = _analytic_aoi(q2, success_prob_s2(channel))

                pv_emp = aoi_emp = float("nan")
                error = None
                if with_sim:
                    key = (q2, p1)
                    if key not in sims:
                        cfg = replace(base, q2=q2, channel=channel,
                                      delay_thresholds=tuple(sorted(set(w_list))))
                        try:
                            sims[key] = (replicate(cfg, n_reps, backend=backend), None)
                        except BacklogOverflowError as exc:
                            sims[key] = (None, str(exc))
                    result, error = sims[key]
                    if result is not None:
                        pv_emp = result.delay_violation[w]
                        aoi_emp = result.avg_aoi

                rows.append(TradeoffPoint(
                    q2=q2, w=w, p1=p1,
                    pv_bound=bound.value,
                    pv_empirical=pv_emp,
                    aoi_analytic=aoi,
                    aoi_empirical=aoi_emp,
                    stable=base.arrivals.lam < service.mean_rate,
                    error=error,
                ))
    return rows


def max_sampling_rate(base: SimConfig, w: int, eps: float,
                      xtol: float = 1e-6) -> OptimizerResult:
    """Largest q2 whose analytical delay bound satisfies P{W > w} <= eps.

    The bound is nondecreasing in q2 (more interference can only hurt
    source 1), which a coarse grid double-checks before bisecting the
    feasibility boundary down to `xtol`. An operating point that fails
    even at q2 = 0 is reported infeasible with NaNs.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError(f"eps must be in (0, 1), got {eps!r}")
    if w < 0:
        raise ValueError(f"w must be nonnegative, got {w!r}")

    def pv(q2: float) -> float:
        service = OnOffService.from_channel(base.channel, q2, base.rate_r)
        return delay_violation_bound(base.arrivals, service, w).value

    grid = np.linspace(0.0, 1.0, _MONO_GRID)
    values = [pv(q) for q in grid]
    drops = np.diff(values) < -_MONO_SLACK
    if drops.any():
        k = int(np.argmax(drops))
        raise NumericalError(
            f"delay bound decreased from q2={grid[k]:g} to q2={grid[k + 1]:g}; "
            "monotone bisection is invalid for this scenario")

    if values[0] > eps:
        return OptimizerResult(q2_max=float("nan"), aoi_at_max=float("nan"),
                               feasible=False, iterations=0)
    q2_max, iterations = bisect_threshold(lambda q: pv(q) <= eps, 0.0, 1.0, xtol)
    p2 = success_prob_s2(base.channel)
    return OptimizerResult(q2_max=q2_max, aoi_at_max=_analytic_aoi(q2_max, p2),
                           feasible=True, iterations=iterations)
