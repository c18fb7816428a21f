"""Hot numeric kernels with two interchangeable backends.

The numba backend JIT-compiles the per-prime loops; the numpy backend is a
pure-vectorized fallback.  Selection: environment variable CHEBBIAS_BACKEND
set to "numba" or "numpy" ("auto"/unset prefers numba when importable).
Both backends produce bit-identical outputs; `benchmarks/bench_kernels.py`
compares their speed.
"""

from __future__ import annotations

import os

_KNOWN = ("auto", "numba", "numpy")


def _load(name: str):
    if name == "numpy":
        from . import numpy_impl

        return numpy_impl
    if name == "numba":
        from . import numba_impl

        return numba_impl
    raise ValueError(f"unknown kernel backend {name!r}")


def get_backend(name: str = "auto"):
    """Load a kernel backend module by name ("auto" prefers numba)."""
    name = (name or "auto").lower()
    if name not in _KNOWN:
        raise ValueError(f"CHEBBIAS_BACKEND must be one of {_KNOWN}, got {name!r}")
    if name == "auto":
        try:
            return _load("numba")
        except ImportError:
            return _load("numpy")
    return _load(name)


_impl = get_backend(os.environ.get("CHEBBIAS_BACKEND", "auto"))

BACKEND = _impl.BACKEND
sieve_range = _impl.sieve_range
frob_indices = _impl.frob_indices
ddf_pattern_codes = _impl.ddf_pattern_codes
split_counts_batch = _impl.split_counts_batch

from .common import base_primes, mix_index  # noqa: E402  (pure helpers)

__all__ = [
    "BACKEND",
    "base_primes",
    "ddf_pattern_codes",
    "frob_indices",
    "get_backend",
    "mix_index",
    "sieve_range",
    "split_counts_batch",
]
