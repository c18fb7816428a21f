"""Frobenius-class sources: a seeded uniform model, and real quartic
arithmetic through factorization patterns mod p.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Iterator

import numpy as np

from .. import kernels, polyarith as pa
from ..groups import GroupEmbedding, GroupConstructionError
from .frobenius import FrobeniusRecord, SplitData
from .primes import DEFAULT_SEGMENT, XMAX_CAP, prime_segments, sieve_base_for


class SyntheticSource:
    """Uniform Frobenius elements: for each prime p <= xmax the ambient
    element is a pure function of (seed, p), so any segmentation or thread
    count reproduces the identical stream."""

    mode = "synthetic"

    def __init__(
        self,
        emb: GroupEmbedding,
        seed: int,
        xmax: int,
        segment: int = DEFAULT_SEGMENT,
        threads: int = 1,
    ):
        if xmax > XMAX_CAP:
            raise ValueError(f"xmax exceeds the cap {XMAX_CAP}")
        self.embedding = emb
        self.seed = int(seed)
        self.xmax = int(xmax)
        self.segment = segment
        self.threads = max(1, int(threads))
        self.split_data = SplitData(emb)
        self.skipped_ramified = 0
        self._class_of_elem = emb.target.conjugacy().class_of

    def _segment_job(self, base, lo, hi):
        primes = kernels.sieve_range(lo, hi, base)
        if len(primes) == 0:
            return primes, primes
        g_idx = kernels.frob_indices(primes, self.seed, self.embedding.target.order)
        classes = self._class_of_elem[g_idx].astype(np.int64)
        return primes, classes

    def iter_class_segments(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        """Yield (primes, ambient class ids) per segment, in ascending order."""
        base = sieve_base_for(self.xmax)
        ranges = list(prime_segments(self.xmax, self.segment))
        if self.threads == 1:
            for lo, hi in ranges:
                yield self._segment_job(base, lo, hi)
            return
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = [pool.submit(self._segment_job, base, lo, hi) for lo, hi in ranges]
            for fut in futures:
                yield fut.result()

    def element_for(self, p: int) -> int:
        return kernels.mix_index(self.seed, int(p), self.embedding.target.order)

    def records(self) -> Iterator[FrobeniusRecord]:
        """Streaming per-prime records (reference path; slower than segments)."""
        for primes, classes in self.iter_class_segments():
            for p, k in zip(primes.tolist(), classes.tolist()):
                yield FrobeniusRecord(
                    p, k, self.split_data.splits_for_class(k), g=self.element_for(p)
                )

    def spot_check(self, primes: np.ndarray, max_exhaustive: int = 10**4) -> bool:
        """Re-derive splits from the sampled elements for every prime up to
        max_exhaustive and for every 1000th prime beyond, and compare with the
        per-class tables."""
        sel = (primes <= max_exhaustive) | (np.arange(len(primes)) % 1000 == 0)
        ps = primes[sel]
        if len(ps) == 0:
            return True
        g_idx = kernels.frob_indices(ps, self.seed, self.embedding.target.order)
        return self.split_data.check_elements(g_idx)


def factorization_pattern(coeffs_desc: list[int], p: int):
    """Multiset of factor degrees of a monic squarefree integer polynomial
    mod p, or the string "ramified" when p divides the discriminant."""
    if not coeffs_desc or coeffs_desc[0] != 1:
        raise ValueError("polynomial must be monic")
    disc = pa.discriminant(list(coeffs_desc))
    if disc == 0:
        raise ValueError("polynomial is not squarefree")
    if disc % p == 0:
        return "ramified"
    counts = pa.ddf_pattern(list(reversed(coeffs_desc)), p)
    degs: list[int] = []
    for deg, cnt in counts.items():
        degs.extend([deg] * cnt)
    return tuple(sorted(degs))


def _cycle_type(perm: np.ndarray) -> tuple[int, ...]:
    seen = np.zeros(len(perm), dtype=bool)
    out = []
    for s in range(len(perm)):
        if seen[s]:
            continue
        length = 0
        x = s
        while not seen[x]:
            seen[x] = True
            x = int(perm[x])
            length += 1
        out.append(length)
    return tuple(sorted(out))


class QuarticSource:
    """Frobenius classes of a monic squarefree polynomial read off from its
    factorization pattern mod p; primes dividing the discriminant are skipped
    and counted.  The ambient group must be a permutation group on the roots
    whose conjugacy classes are separated by cycle type."""

    mode = "quartic"

    def __init__(
        self,
        coeffs_desc: list[int],
        emb: GroupEmbedding,
        xmax: int,
        segment: int = DEFAULT_SEGMENT,
        threads: int = 1,
    ):
        if xmax > XMAX_CAP:
            raise ValueError(f"xmax exceeds the cap {XMAX_CAP}")
        Gp = emb.target
        deg = len(coeffs_desc) - 1
        if Gp.backend != "perm" or Gp._b.degree != deg:
            raise GroupConstructionError(
                "ambient group must be a permutation group on the polynomial degree"
            )
        if coeffs_desc[0] != 1:
            raise ValueError("polynomial must be monic")
        self.coeffs_desc = [int(c) for c in coeffs_desc]
        self.coeffs_le = np.asarray(list(reversed(self.coeffs_desc)), dtype=np.int64)
        self.discriminant = pa.discriminant(self.coeffs_desc)
        if self.discriminant == 0:
            raise ValueError("polynomial is not squarefree")
        self.embedding = emb
        self.xmax = int(xmax)
        self.segment = segment
        self.threads = max(1, int(threads))
        self.split_data = SplitData(emb)
        self.seed = None
        part = Gp.conjugacy()
        code_to_class: dict[int, int] = {}
        for c, rep in enumerate(part.reps):
            ct = _cycle_type(Gp.perm_of(int(rep)))
            code = pa.pattern_code({d: ct.count(d) for d in set(ct)})
            if code in code_to_class:
                raise GroupConstructionError(
                    "conjugacy classes are not separated by cycle type"
                )
            code_to_class[code] = c
        self._codes = np.asarray(sorted(code_to_class), dtype=np.uint64)
        self._code_class = np.asarray(
            [code_to_class[int(c)] for c in self._codes], dtype=np.int64
        )
        self.skipped_ramified = 0
        self._ramified_primes: list[int] = []

    def _segment_job(self, base, lo, hi):
        primes = kernels.sieve_range(lo, hi, base)
        if len(primes) == 0:
            return primes, primes, primes
        disc = abs(self.discriminant)
        if disc < 2**62:
            ram_mask = disc % primes == 0
        else:
            ram_mask = np.asarray([disc % int(p) == 0 for p in primes], dtype=bool)
        ram = primes[ram_mask]
        good = primes[~ram_mask]
        codes = kernels.ddf_pattern_codes(good, self.coeffs_le)
        pos = np.searchsorted(self._codes, codes)
        bad = (pos >= len(self._codes)) | (self._codes[np.minimum(pos, len(self._codes) - 1)] != codes)
        if bad.any():
            p_bad = int(good[bad][0])
            raise GroupConstructionError(
                f"pattern at p={p_bad} matches no conjugacy class; "
                "the polynomial's Galois group is not the given group"
            )
        classes = self._code_class[pos]
        return good, classes, ram

    def iter_class_segments(self) -> Iterator[tuple[np.ndarray, np.ndarray]]:
        self.skipped_ramified = 0
        self._ramified_primes = []
        base = sieve_base_for(self.xmax)
        ranges = list(prime_segments(self.xmax, self.segment))

        def consume(res):
            good, classes, ram = res
            self.skipped_ramified += len(ram)
            self._ramified_primes.extend(int(r) for r in ram)
            return good, classes

        if self.threads == 1:
            for lo, hi in ranges:
                yield consume(self._segment_job(base, lo, hi))
            return
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = [pool.submit(self._segment_job, base, lo, hi) for lo, hi in ranges]
            for fut in futures:
                yield consume(fut.result())

    @property
    def ramified_primes(self) -> list[int]:
        return sorted(self._ramified_primes)

    def records(self) -> Iterator[FrobeniusRecord]:
        for primes, classes in self.iter_class_segments():
            for p, k in zip(primes.tolist(), classes.tolist()):
                yield FrobeniusRecord(p, k, self.split_data.splits_for_class(k))
