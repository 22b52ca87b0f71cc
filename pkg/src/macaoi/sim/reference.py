"""Plain-Python reference implementation of the slot dynamics.

This is the normative spelling of one slot: arrivals join the queue,
source 1 transmits (always, or only when its queue is nonempty), the
destination decodes each source against noise plus the other source's
interference, then the sensor's age either resets or grows. The compiled
kernel and the vectorized fallback must reproduce `step_slot` bit for
bit; tests compare all three on shared draws.

Only used directly in tests and for debugging — it is orders of
magnitude slower than either production backend.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class SlotParams:
    """Per-slot constants: received-power coefficients and thresholds."""

    c1: float        # P1 * r1**-theta, mean received power of source 1 [W]
    c2: float
    sigma2: float    # noise power [W]
    gamma1: float    # SINR threshold of source 1 (linear)
    gamma2: float
    rate: float      # service on success [nats/slot]
    q2: float        # sensor sampling probability
    queue_aware: bool


@dataclass
class QueueState:
    """Source-1 queue with cumulative A(0,t) / D(0,t) bookkeeping."""

    backlog: float = 0.0          # nats buffered at source 1
    arrivals_total: float = 0.0   # A(0, t), nats
    departures_total: float = 0.0  # D(0, t), nats


@dataclass
class AoITracker:
    """Age of the freshest delivered sensor sample, in slots.

    `age` is the value *at* the current slot, before that slot's
    transmission outcome is known; a success during the slot makes the
    age 1 at the next slot. `record` accumulates the time average.
    """

    age: int = 1
    history_sum: int = 0
    successes: int = 0

    def record(self) -> None:
        self.history_sum += self.age

    def advance(self, delivered: bool) -> None:
        if delivered:
            self.age = 1
            self.successes += 1
        else:
            self.age += 1


def step_slot(state: QueueState, arrival: float,
              g1: float, g2: float, u2: float,
              par: SlotParams) -> tuple[float, bool, bool]:
    """Advance the queue one slot; returns (departed, s2_sampled, s2_delivered)."""
    state.arrivals_total += arrival
    q = state.backlog + arrival
    s2_active = u2 < par.q2
    s1_tx = (not par.queue_aware) or (q > 0.0)

    ok1 = False
    if s1_tx:
        if s2_active:
            ok1 = par.c1 * g1 >= par.gamma1 * (par.c2 * g2 + par.sigma2)
        else:
            ok1 = par.c1 * g1 >= par.gamma1 * par.sigma2
    if ok1:
        if par.rate < q:
            dep = par.rate
            state.backlog = q - par.rate
        else:
            dep = q
            state.backlog = 0.0
    else:
        dep = 0.0
        state.backlog = q

    ok2 = False
    if s2_active:
        if s1_tx:
            ok2 = par.c2 * g2 >= par.gamma2 * (par.c1 * g1 + par.sigma2)
        else:
            ok2 = par.c2 * g2 >= par.gamma2 * par.sigma2

    state.departures_total += dep
    return dep, bool(s2_active), bool(ok2)


def step_queue(g1, g2, u2,
               c1, c2, sigma2, gamma1, gamma2,
               rate, lam, rho, q2,
               queue_aware, ceiling,
               backlog_out, s2_gen, s2_ok):
    """Same contract as the compiled kernel; see _kernel.pyx."""
    par = SlotParams(c1, c2, sigma2, gamma1, gamma2, rate, q2, bool(queue_aware))
    state = QueueState()
    n = g1.shape[0]
    for i in range(n):
        a = lam + rho if i == 0 else lam
        _, active, ok2 = step_slot(state, a, g1[i], g2[i], u2[i], par)
        backlog_out[i] = state.backlog
        s2_gen[i] = active
        s2_ok[i] = ok2
        if state.backlog > ceiling:
            return state.backlog, i
    return state.backlog, -1
