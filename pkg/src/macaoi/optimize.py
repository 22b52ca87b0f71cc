"""Scalar minimisation used by the bound solvers.

The objectives are smooth and empirically unimodal on their feasible range
but blow up to +inf at both ends, so the strategy is: evaluate on a
geometric grid to locate the basin (guarding against surprises), then
refine with golden-section search.
"""

from __future__ import annotations

import math
from typing import Callable, Sequence

from .errors import NumericalError

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


def golden_section(f: Callable[[float], float], a: float, b: float,
                   xtol: float = 1e-9) -> tuple[float, float]:
    """Minimise a unimodal f on [a, b] to within xtol in x.

    Returns (x_min, f(x_min)). Only interior points are evaluated, so the
    endpoints may be infeasible (f = +inf) brackets.
    """
    if not b > a:
        raise ValueError(f"invalid bracket [{a}, {b}]")
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    while abs(b - a) > xtol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
    if fc < fd:
        return c, fc
    return d, fd


def geometric_grid(start: float = 1e-4, factor: float = 2.0,
                   decades_down: int = 16, max_up: int = 80) -> list[float]:
    """Doubling grid around `start`, extended a few decades downward so a
    near-critical basin squeezed below `start` is still caught."""
    down = [start * factor ** -k for k in range(decades_down, 0, -1)]
    up = [start * factor ** k for k in range(max_up + 1)]
    return down + up


def _feasible_edge(f: Callable[[float], float], inner: float, outer: float,
                   iters: int = 60) -> float:
    """Shrink `outer` toward feasible `inner` until f is finite there.

    The feasible set is an interval containing `inner`, so bisecting the
    segment pins its boundary; the returned point always has finite f.
    """
    if math.isfinite(f(outer)):
        return outer
    lo, hi = inner, outer
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if math.isfinite(f(mid)):
            lo = mid
        else:
            hi = mid
    return lo


def minimize_unimodal(f: Callable[[float], float], grid: Sequence[float],
                      xtol: float = 1e-9) -> tuple[float, float]:
    """Grid scan followed by golden-section refinement around the grid minimum.

    f may return +inf outside its feasible range. The grid scan stops after
    the values leave the feasible range again (the feasible set is an
    interval), and the refinement bracket is clipped to that interval first:
    golden section compares +inf against +inf arbitrarily, so handing it a
    bracket that overlaps the infeasible region can lose the basin entirely.
    Raises NumericalError when no grid point is feasible.
    """
    best_i = -1
    best_v = math.inf
    values = []
    seen_finite = False
    for i, s in enumerate(grid):
        v = f(s)
        values.append(v)
        if math.isfinite(v):
            seen_finite = True
            if v < best_v:
                best_i, best_v = i, v
        elif seen_finite:
            break  # left the feasible interval
    if best_i < 0:
        raise NumericalError("objective is infeasible on the whole search grid")
    x0 = grid[best_i]
    lo = _feasible_edge(f, x0, grid[best_i - 1] if best_i > 0 else x0 * 0.5)
    hi = _feasible_edge(f, x0, grid[best_i + 1] if best_i + 1 < len(values) else x0 * 2.0)
    if not lo < hi:
        return x0, best_v
    x, v = golden_section(f, lo, hi, xtol=xtol)
    if best_v < v:
        return grid[best_i], best_v
    return x, v


def bisect_threshold(pred: Callable[[float], bool], lo: float, hi: float,
                     xtol: float = 1e-6, max_iter: int = 200) -> tuple[float, int]:
    """Largest x in [lo, hi] with pred(x) true, for pred true-then-false.

    Requires pred(lo) to hold. Returns (x, iterations).
    """
    if not pred(lo):
        raise ValueError("predicate must hold at the lower endpoint")
    if pred(hi):
        return hi, 0
    it = 0
    while hi - lo > xtol and it < max_iter:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
        it += 1
    return lo, it
