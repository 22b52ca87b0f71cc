"""(min,x) stochastic network calculus bounds for the delay-sensitive flow.

Works on exponentiated arrival/service processes, where Mellin transforms
M_X(s) = E[X^(s-1)] replace moment generating functions. The central object
is the steady-state kernel

    K(s, -w) <= exp(rho s) M_g(1-s)^w / (1 - exp(lambda s) M_g(1-s)),

whose infimum over s > 0 upper-bounds the probability that the virtual
delay exceeds w slots. All kernel arithmetic happens in log space so large
w and large s cannot overflow.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Union

import numpy as np

from . import channel as _channel
from .errors import UnstableError
from .optimize import geometric_grid, minimize_unimodal
from .special import upper_incomplete_gamma


@dataclass(frozen=True)
class ArrivalEnvelope:
    """Affine arrival bound: burst rho [nats] plus rate lam [nats/slot]."""

    rho: float
    lam: float

    def __post_init__(self):
        if not (self.rho >= 0.0 and math.isfinite(self.rho)):
            raise ValueError(f"rho must be nonnegative, got {self.rho!r}")
        if not (self.lam >= 0.0 and math.isfinite(self.lam)):
            raise ValueError(f"lam must be nonnegative, got {self.lam!r}")


@dataclass(frozen=True)
class OnOffService:
    """Memoryless on-off server: R nats on success, 0 on error.

    The per-slot error probability is eps1 when the sensor is silent and
    eps2 when it interferes; with sampling probability q2 the composite
    error is beta = eps1 - q2 (eps1 - eps2) = (1-q2) eps1 + q2 eps2.
    """

    rate_r: float  # transmission rate [nats/slot]
    eps1: float    # error probability without sensor interference
    eps2: float    # error probability with sensor interference
    q2: float      # sensor sampling probability per slot
    beta: float = field(init=False)

    def __post_init__(self):
        if not (self.rate_r > 0.0 and math.isfinite(self.rate_r)):
            raise ValueError(f"rate_r must be positive, got {self.rate_r!r}")
        if not 0.0 <= self.eps1 <= self.eps2 <= 1.0:
            raise ValueError(
                f"need 0 <= eps1 <= eps2 <= 1, got eps1={self.eps1!r}, eps2={self.eps2!r}")
        if not 0.0 <= self.q2 <= 1.0:
            raise ValueError(f"q2 must be in [0, 1], got {self.q2!r}")
        object.__setattr__(self, "beta", self.eps1 - self.q2 * (self.eps1 - self.eps2))

    @classmethod
    def from_channel(cls, params: _channel.ChannelParams, q2: float,
                     rate_r: float | None = None) -> "OnOffService":
        """Derive the on-off server from the fading channel closed forms."""
        return cls(
            rate_r=params.rate1 if rate_r is None else rate_r,
            eps1=_channel.outage_single(params),
            eps2=_channel.outage_interfered(params),
            q2=q2,
        )

    def mellin(self, s: float) -> float:
        return mellin_onoff(self, s)

    @property
    def mean_rate(self) -> float:
        """Long-run average service rate R(1-beta) [nats/slot].

        A steady-state kernel (hence any finite delay/backlog bound)
        exists exactly when the arrival rate is strictly below this.
        """
        return self.rate_r * (1.0 - self.beta)


@dataclass(frozen=True)
class RateAdaptService:
    """Server that adapts its rate to the instantaneous channel capacity."""

    snr: float  # average received SNR of the delay-sensitive link (linear)
    q2: float   # sensor sampling probability per slot

    def __post_init__(self):
        if not (self.snr > 0.0 and math.isfinite(self.snr)):
            raise ValueError(f"snr must be positive, got {self.snr!r}")
        if not 0.0 <= self.q2 <= 1.0:
            raise ValueError(f"q2 must be in [0, 1], got {self.q2!r}")

    def mellin(self, s: float) -> float:
        return mellin_rate_adapt(self, s)


@dataclass(frozen=True)
class BoundResult:
    """Outcome of a bound search.

    value   -- the bound itself (probability, or nats for backlog)
    s_star  -- minimising s (nan when no stable s exists)
    stable  -- False when the bound is vacuous: no s > 0 satisfies the
               stability condition, or the kernel minimum is >= 1 and the
               reported probability is clamped to exactly 1.0
    """

    value: float
    s_star: float
    stable: bool


MellinLike = Union[OnOffService, RateAdaptService, Callable[[float], float]]


def mellin_onoff(service: OnOffService, s: float) -> float:
    """E[g^(s-1)] for the on-off server: exp((s-1)R)(1-beta) + beta."""
    return math.exp((s - 1.0) * service.rate_r) * (1.0 - service.beta) + service.beta


def mellin_arrival(env: ArrivalEnvelope, s: float, tau: int, t: int) -> float:
    """Upper bound on the arrival Mellin transform over [tau, t).

    For the affine envelope with constant (rho, lam):
    exp((s-1)(lam (t-tau) + rho)).
    """
    if t < tau:
        raise ValueError(f"need t >= tau, got tau={tau}, t={t}")
    return math.exp((s - 1.0) * (env.lam * (t - tau) + env.rho))


def mellin_rate_adapt(service: RateAdaptService, s: float) -> float:
    """Mixed Mellin transform of the rate-adaptive server.

    (1-q2) M_z1(s) + q2 M_z2(s) with
      M_z1(s) = exp(1/snr) snr^(s-1) Gamma(s, 1/snr)
      M_z2(s) = 1 + (s-1) exp(1/snr) snr^(s-2) Gamma(s-2, 1/snr).

    Both terms are finite for every real s since 1/snr > 0. M_z1 equals
    E[(1 + snr g)^(s-1)] for unit-mean exponential g and is a valid Mellin
    transform for all s; the interfered branch M_z2 can leave (0, inf) for
    s far below 1 depending on snr, and the bound solvers treat any s where
    the mixture is nonpositive as infeasible.
    """
    y = 1.0 / service.snr
    log_snr = math.log(service.snr)
    ey = math.exp(y)
    m_z1 = ey * math.exp((s - 1.0) * log_snr) * upper_incomplete_gamma(s, y)
    m_z2 = 1.0 + (s - 1.0) * ey * math.exp((s - 2.0) * log_snr) \
        * upper_incomplete_gamma(s - 2.0, y)
    return (1.0 - service.q2) * m_z1 + service.q2 * m_z2


def _log_mellin_one_minus(service: MellinLike) -> Callable[[float], float]:
    """log M_g(1-s) as a function of s, robust for the on-off closed form.

    For generic callables, nonpositive or nonfinite transform values are
    mapped to +inf so the solvers treat those s as infeasible.
    """
    if isinstance(service, OnOffService):
        rate, beta = service.rate_r, service.beta
        if beta >= 1.0:
            return lambda s: 0.0  # server never on: M identically 1
        log_on = math.log1p(-beta)
        log_off = math.log(beta) if beta > 0.0 else -math.inf

        def log_m(s: float) -> float:
            return float(np.logaddexp(log_on - s * rate, log_off))

        return log_m

    mellin = service.mellin if isinstance(service, RateAdaptService) else service

    def log_m(s: float) -> float:
        v = mellin(1.0 - s)
        if not (math.isfinite(v) and v > 0.0):
            return math.inf
        return math.log(v)

    return log_m


def is_stable(env: ArrivalEnvelope, mellin_service: MellinLike, s: float) -> bool:
    """Stability condition at s: exp(lam s) M_g(1-s) < 1."""
    if s <= 0.0:
        raise ValueError(f"s must be positive, got {s!r}")
    return env.lam * s + _log_mellin_one_minus(mellin_service)(s) < 0.0


def _log_steady_kernel(env: ArrivalEnvelope, log_m: Callable[[float], float],
                       s: float, w: int) -> float:
    """log of the steady-state kernel bound; +inf when unstable at s."""
    lm = log_m(s)
    if not math.isfinite(lm):
        return math.inf
    x = env.lam * s + lm
    if x >= 0.0:
        return math.inf
    return env.rho * s + w * lm - math.log(-math.expm1(x))


def steady_kernel(env: ArrivalEnvelope, mellin_service: MellinLike,
                  s: float, w: int) -> float:
    """Steady-state kernel bound K(s, -w) at a given s > 0.

    Raises UnstableError when the stability condition fails at s (the
    geometric series behind the steady state diverges).
    """
    if s <= 0.0:
        raise ValueError(f"s must be positive, got {s!r}")
    if w < 0:
        raise ValueError(f"w must be nonnegative, got {w!r}")
    log_k = _log_steady_kernel(env, _log_mellin_one_minus(mellin_service), s, w)
    if log_k is math.inf:
        raise UnstableError(f"stability condition fails at s={s}")
    return math.exp(log_k) if log_k < 709.0 else math.inf

def finite_horizon_kernel(env: ArrivalEnvelope, mellin_service: MellinLike,
                          s: float, w: int, t: int) -> float:
    """Finite-t delay kernel K(s, t+w, t), summed term by term.

    Exposed for inspection of steady-state convergence; the bounds below
    always use the t -> inf limit and never optimise over t.
    """
    if s <= 0.0 or w < 0 or t < 0:
        raise ValueError("need s > 0, w >= 0, t >= 0")
    lm = _log_mellin_one_minus(mellin_service)(s)
    u = np.arange(t + 1)
    log_terms = s * (env.lam * (t - u) + env.rho) + (t + w - u) * lm
    peak = float(np.max(log_terms))
    log_k = peak + math.log(float(np.sum(np.exp(log_terms - peak))))
    return math.exp(log_k) if log_k < 709.0 else math.inf


def delay_violation_bound(env: ArrivalEnvelope, mellin_service: MellinLike,
                          w: int, s_tol: float = 1e-9) -> BoundResult:
    """Upper bound on P{virtual delay > w}: inf over s > 0 of the kernel.

    The search brackets the minimiser on a geometric grid and refines by
    golden section to s_tol. A vacuous outcome (no stable s, or minimum
    >= 1) reports value exactly 1.0 with stable=False rather than the raw
    kernel value, because the bound is a probability and a violation is
    then certain as far as the analysis can tell.
    """
    if w < 0:
        raise ValueError(f"w must be nonnegative, got {w!r}")
    log_m = _log_mellin_one_minus(mellin_service)

    def objective(s: float) -> float:
        if s <= 0.0:
            return math.inf
        return _log_steady_kernel(env, log_m, s, w)

    try:
        s_star, log_v = minimize_unimodal(objective, geometric_grid(), xtol=s_tol)
    except Exception:
        return BoundResult(value=1.0, s_star=math.nan, stable=False)
    if log_v >= 0.0:
        return BoundResult(value=1.0, s_star=s_star, stable=False)
    return BoundResult(value=math.exp(log_v), s_star=s_star, stable=True)


def backlog_bound(env: ArrivalEnvelope, mellin_service: MellinLike,
                  epsilon: float, s_tol: float = 1e-9) -> BoundResult:
    """Backlog level b with P{backlog > b} <= epsilon in steady state.

    Minimises (1/s)(rho s + log[1/(1 - exp(lam s) M_g(1-s))] - log epsilon)
    over stable s > 0. Raises UnstableError when no s > 0 stabilises the
    system.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon!r}")
    log_m = _log_mellin_one_minus(mellin_service)
    log_eps = math.log(epsilon)

    def objective(s: float) -> float:
        if s <= 0.0:
            return math.inf
        lm = log_m(s)
        if not math.isfinite(lm):
            return math.inf
        x = env.lam * s + lm
        if x >= 0.0:
            return math.inf
        return (env.rho * s - math.log(-math.expm1(x)) - log_eps) / s

    try:
        s_star, value = minimize_unimodal(objective, geometric_grid(), xtol=s_tol)
    except Exception as exc:
        raise UnstableError("no s > 0 satisfies the stability condition") from exc
    return BoundResult(value=value, s_star=s_star, stable=True)
