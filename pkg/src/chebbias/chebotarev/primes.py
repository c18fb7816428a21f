"""Prime-range iteration and integer root helpers for the counting engine."""

from __future__ import annotations

import math

import numpy as np

from ..kernels import base_primes, sieve_range

XMAX_CAP = 10**9
DEFAULT_SEGMENT = 1 << 22


def int_nth_root(x: int, n: int) -> int:
    """Largest y >= 0 with y**n <= x (exact, no float boundary errors)."""
    if x < 0 or n < 1:
        raise ValueError("need x >= 0 and n >= 1")
    if n == 1 or x < 2:
        return x
    y = int(round(x ** (1.0 / n)))
    while y > 0 and y**n > x:
        y -= 1
    while (y + 1) ** n <= x:
        y += 1
    return y


def default_checkpoints(xmax: int, count: int = 100, start: int = 1000) -> list[int]:
    """Log-spaced integer checkpoints from `start` (clamped) up to xmax."""
    xmax = int(xmax)
    if xmax < 2:
        raise ValueError("xmax must be at least 2")
    start = min(start, xmax)
    if start < 2:
        start = 2
    if count < 2 or start == xmax:
        return [xmax]
    grid = np.geomspace(start, xmax, count)
    pts = sorted({int(round(v)) for v in grid} | {xmax})
    return pts


def prime_segments(xmax: int, segment: int = DEFAULT_SEGMENT):
    """Yield (lo, hi) half-open ranges covering [2, xmax]."""
    xmax = int(xmax)
    if xmax > XMAX_CAP:
        raise ValueError(f"xmax exceeds the cap {XMAX_CAP}")
    lo = 2
    while lo <= xmax:
        hi = min(lo + segment, xmax + 1)
        yield lo, hi
        lo = hi


def sieve_base_for(xmax: int) -> np.ndarray:
    return base_primes(int(math.isqrt(int(xmax))) + 1)


def primes_upto(xmax: int) -> np.ndarray:
    """All primes <= xmax in one array (small ranges only)."""
    return sieve_range(2, int(xmax) + 1, sieve_base_for(xmax))
