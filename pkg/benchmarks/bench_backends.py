"""Throughput comparison of the simulator backends.

Times the slot kernel alone (fading draws pre-generated, output arrays
reused) and a full run_simulation() call (draw generation plus metric
extraction) for every backend that imports. Reports the best of
--repeat runs in million slots per second.

Usage: python benchmarks/bench_backends.py [--horizon N] [--repeat K]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from macaoi.presets import make_baseline_config
from macaoi.sim import run_simulation
from macaoi.sim.backends import resolve
from macaoi.sim.runner import generate_draws

BACKENDS = ("cython", "numpy", "reference")


def best_of(fn, repeat):
    def timed():
        start = time.perf_counter()
        fn()
        return time.perf_counter() - start

    return min(timed() for _ in range(repeat))


def bench_kernel(step, config, draws, repeat):
    g1, g2, u2 = draws
    n = config.horizon
    backlog = np.zeros(n)
    s2_gen = np.zeros(n, dtype=np.uint8)
    s2_ok = np.zeros(n, dtype=np.uint8)
    ch = config.channel

    def call():
        step(g1, g2, u2,
             ch.p1 * ch.r1 ** -ch.theta, ch.p2 * ch.r2 ** -ch.theta,
             ch.sigma2, ch.gamma1, ch.gamma2,
             config.rate_r, config.arrivals.lam, config.arrivals.rho,
             config.q2, False, config.backlog_ceiling,
             backlog, s2_gen, s2_ok)

    call()                                   # warm caches / JIT-free sanity
    return best_of(call, repeat)


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--horizon", type=int, default=1_000_000,
                        help="slots per run (default 1e6)")
    parser.add_argument("--repeat", type=int, default=5,
                        help="timed runs per cell, best is reported")
    args = parser.parse_args(argv)

    config = make_baseline_config(horizon=args.horizon)
    draws = generate_draws(config)
    slots = float(args.horizon)

    print(f"horizon={args.horizon} slots, best of {args.repeat}")
    print(f"{'backend':<10} {'kernel Mslots/s':>16} {'end-to-end Mslots/s':>20}")
    for name in BACKENDS:
        try:
            _, step = resolve(name)
        except ImportError:
            print(f"{name:<10} {'(not built)':>16}")
            continue
        t_kernel = bench_kernel(step, config, draws, args.repeat)
        t_full = best_of(lambda: run_simulation(config, backend=name),
                         args.repeat)
        print(f"{name:<10} {slots / t_kernel / 1e6:>16.1f} "
              f"{slots / t_full / 1e6:>20.1f}")


if __name__ == "__main__":
    main()
