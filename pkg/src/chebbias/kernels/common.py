"""Shared constants and pure-python reference helpers for the kernels."""

from __future__ import annotations

import numpy as np

MASK64 = (1 << 64) - 1

# splitmix64-style keyed mixer constants
MIX_A = 0x9E3779B97F4A7C15
MIX_B = 0xD1B54A32D192ED03
MIX_C1 = 0xBF58476D1CE4E5B9
MIX_C2 = 0x94D049BB133111EB

PRIME_CAP = 2**31  # keeps products inside int64 in the modular kernels


def mix64(z: int) -> int:
    """64-bit finalizer; python-int reference shared by both backends."""
    z &= MASK64
    z = ((z ^ (z >> 30)) * MIX_C1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_C2) & MASK64
    return z ^ (z >> 31)


def mix_index(seed: int, p: int, order: int) -> int:
    """Uniform index in [0, order) as a pure function of (seed, p).

    Keyed mixer with rejection sampling, so the reduction mod `order` is
    exactly uniform.  The array kernels reproduce this bit for bit.
    """
    bound = (2**64 // order) * order
    ctr = 0
    while True:
        z = mix64(((seed * MIX_A) ^ p) + ctr * MIX_B)
        if z < bound:
            return z % order
        ctr += 1


def base_primes(limit: int) -> np.ndarray:
    """All primes <= limit by a plain sieve (used to seed the segmented one)."""
    if limit < 2:
        return np.empty(0, dtype=np.int64)
    is_prime = np.ones(limit + 1, dtype=bool)
    is_prime[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if is_prime[p]:
            is_prime[p * p :: p] = False
    return np.flatnonzero(is_prime).astype(np.int64)
