"""Pure-numpy kernel backend (no JIT).

Per-prime loops are replaced by vectorized passes over prime blocks; the
polynomial factorization kernel vectorizes the dominant modular
exponentiation and finishes the tiny gcd chains per prime.
"""

from __future__ import annotations

import numpy as np

from .. import polyarith as pa
from .common import MASK64, MIX_A, MIX_B, MIX_C1, MIX_C2, PRIME_CAP

BACKEND = "numpy"

_U = np.uint64


def sieve_range(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi); `base` must hold all primes up to sqrt(hi)."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    mask = np.ones(hi - lo, dtype=bool)
    for p in base:
        p = int(p)
        if p * p >= hi:
            break
        start = max(p * p, ((lo + p - 1) // p) * p)
        if start < hi:
            mask[start - lo :: p] = False
    return (lo + np.flatnonzero(mask)).astype(np.int64)


def _mix_vec(z: np.ndarray) -> np.ndarray:
    z = z ^ (z >> _U(30))
    z = z * _U(MIX_C1)
    z = z ^ (z >> _U(27))
    z = z * _U(MIX_C2)
    return z ^ (z >> _U(31))


def frob_indices(primes: np.ndarray, seed: int, order: int) -> np.ndarray:
    """Uniform element index per prime via the keyed mixer with rejection."""
    bound = (2**64 // order) * order
    all_accept = bound == 2**64
    base = _U((seed * MIX_A) & MASK64) ^ primes.astype(np.uint64)
    z = _mix_vec(base)
    if not all_accept:
        bound_u = _U(bound)
        ctr = np.zeros(len(primes), dtype=np.uint64)
        bad = z >= bound_u
        while bad.any():
            ctr[bad] += _U(1)
            z[bad] = _mix_vec(base[bad] + ctr[bad] * _U(MIX_B))
            bad &= z >= bound_u
    return (z % _U(order)).astype(np.int64)


def _poly_square_mod(r: np.ndarray, fc: np.ndarray, p: np.ndarray) -> np.ndarray:
    """(r*r) mod f, rows are little-endian coefficient vectors mod p."""
    n, d = r.shape
    conv = np.zeros((n, 2 * d - 1), dtype=np.int64)
    for i in range(d):
        conv[:, i : i + d] += r[:, i : i + 1] * r
        conv %= p[:, None]
    for k in range(2 * d - 2, d - 1, -1):
        c = conv[:, k]
        conv[:, k - d : k] = (conv[:, k - d : k] - c[:, None] * fc[:, :d]) % p[:, None]
        conv[:, k] = 0
    return conv[:, :d]


def _poly_mulx_mod(r: np.ndarray, fc: np.ndarray, p: np.ndarray) -> np.ndarray:
    n, d = r.shape
    out = np.zeros_like(r)
    out[:, 1:] = r[:, : d - 1]
    c = r[:, d - 1]
    return (out - c[:, None] * fc[:, :d]) % p[:, None]


def _xpow_p_mod(primes: np.ndarray, fc: np.ndarray) -> np.ndarray:
    """X^p mod f for each prime p (rows of fc are f mod p, little-endian)."""
    n = len(primes)
    d = fc.shape[1] - 1
    r = np.zeros((n, d), dtype=np.int64)
    r[:, 0] = 1
    for bit in range(int(primes.max()).bit_length() - 1, -1, -1):
        r = _poly_square_mod(r, fc, primes)
        hit = (primes >> bit) & 1 == 1
        if hit.any():
            rx = _poly_mulx_mod(r[hit], fc[hit], primes[hit])
            r[hit] = rx
    return r


def ddf_pattern_codes(primes: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Factorization-degree pattern code per prime (monic squarefree input).

    The caller must exclude primes dividing the discriminant.
    """
    if len(primes) == 0:
        return np.empty(0, dtype=np.uint64)
    if int(primes.max()) >= PRIME_CAP:
        raise ValueError("primes above 2^31 are not supported")
    coeffs = np.asarray(coeffs, dtype=np.int64)
    fc = coeffs[None, :] % primes[:, None]
    h1 = _xpow_p_mod(primes, fc)
    out = np.empty(len(primes), dtype=np.uint64)
    coeff_list = coeffs.tolist()
    for i in range(len(primes)):
        p = int(primes[i])
        counts = _ddf_finish(coeff_list, p, [int(v) for v in h1[i]])
        out[i] = pa.pattern_code(counts)
    return out


def _ddf_finish(coeffs_le: list[int], p: int, h1: list[int]) -> dict[int, int]:
    """Distinct-degree split given X^p mod f; mirrors polyarith.ddf_pattern."""
    f = pa.trim([c % p for c in coeffs_le])
    d = pa.degree(f)
    counts: dict[int, int] = {}
    h1 = pa.trim(list(h1))
    hj = h1
    fstar = f
    j = 1
    while pa.degree(fstar) > 0:
        if pa.degree(fstar) < 2 * j:
            dd = pa.degree(fstar)
            counts[dd] = counts.get(dd, 0) + 1
            break
        if j > 1:
            hj = pa.pcompose_mod(hj, h1, f, p)
        diff = list(pa.pmod(hj, fstar, p))
        while len(diff) < 2:
            diff.append(0)
        diff[1] = (diff[1] - 1) % p
        g = pa.pgcd(pa.trim(diff), fstar, p)
        dg = pa.degree(g)
        if dg > 0:
            counts[j] = counts.get(j, 0) + dg // j
            fstar = pa.pdivexact(fstar, g, p)
        j += 1
    return counts


def split_counts_batch(
    perms: np.ndarray,
    sorted_keys: np.ndarray,
    key_order: np.ndarray,
    rep_perms: np.ndarray,
    rep_inv_perms: np.ndarray,
    coset_of: np.ndarray,
    img_class: np.ndarray,
    g_indices: np.ndarray,
    orders: np.ndarray,
    n_src_classes: int,
) -> np.ndarray:
    """counts[gi, f, c] = number of size-f orbits of g on the cosets whose
    power-residue element lands in source class c."""
    d = perms.shape[1]
    shifts = _U(4) * np.arange(d, dtype=np.uint64)

    def lookup(rows: np.ndarray) -> np.ndarray:
        keys = (rows.astype(np.uint64) << shifts).sum(axis=-1, dtype=np.uint64)
        pos = np.searchsorted(sorted_keys, keys)
        return key_order[pos]

    nc = rep_perms.shape[0]
    coset_ids = np.arange(nc)
    max_f = int(orders[g_indices].max()) if len(g_indices) else 1
    out = np.zeros((len(g_indices), max_f + 1, n_src_classes), dtype=np.int64)
    for gi, g in enumerate(g_indices):
        g = int(g)
        m = int(orders[g])
        gp = perms[g]
        divisors = [k for k in range(1, m + 1) if m % k == 0]
        act = coset_of[lookup(gp[rep_perms])]
        act_pows = {1: act}
        cur = act
        for k in range(2, m + 1):
            cur = act[cur]
            if m % k == 0:
                act_pows[k] = cur
        f_min = np.full(nc, m, dtype=np.int64)
        assigned = np.zeros(nc, dtype=bool)
        for k in divisors:
            hit = ~assigned & (act_pows[k] == coset_ids)
            f_min[hit] = k
            assigned |= hit
        gpow = np.arange(d, dtype=np.uint8)
        gpows = {0: gpow}
        for k in range(1, m + 1):
            gpow = gp[gpow]
            gpows[k] = gpow
        for k in divisors:
            sel = f_min == k
            if not sel.any():
                continue
            inner = gpows[k][rep_perms[sel]]
            phi = np.take_along_axis(rep_inv_perms[sel], inner.astype(np.int64), axis=1)
            cls = img_class[lookup(phi)]
            if (cls < 0).any():
                raise ValueError("orbit power residue fell outside the subgroup image")
            np.add.at(out[gi, k], cls, 1)
            if int(out[gi, k].sum()) % k:
                raise AssertionError("coset orbit accounting mismatch")
        out[gi] //= np.maximum(np.arange(max_f + 1), 1)[:, None]
    return out.astype(np.int32)
