"""Numba-JIT kernel backend; bit-identical to the numpy backend."""

from __future__ import annotations

import numpy as np
from numba import njit

from .common import MASK64, MIX_A, MIX_B, MIX_C1, MIX_C2, PRIME_CAP

BACKEND = "numba"

_A = np.uint64(MIX_A)
_B = np.uint64(MIX_B)
_C1 = np.uint64(MIX_C1)
_C2 = np.uint64(MIX_C2)
_S30 = np.uint64(30)
_S27 = np.uint64(27)
_S31 = np.uint64(31)


@njit(cache=True, nogil=True)
def _sieve_kernel(lo, hi, base):
    size = hi - lo
    mask = np.ones(size, dtype=np.uint8)
    for bi in range(base.shape[0]):
        p = base[bi]
        if p * p >= hi:
            break
        start = ((lo + p - 1) // p) * p
        if p * p > start:
            start = p * p
        for m in range(start, hi, p):
            mask[m - lo] = 0
    count = 0
    for i in range(size):
        if mask[i]:
            count += 1
    out = np.empty(count, dtype=np.int64)
    k = 0
    for i in range(size):
        if mask[i]:
            out[k] = lo + i
            k += 1
    return out


def sieve_range(lo: int, hi: int, base: np.ndarray) -> np.ndarray:
    """Primes in [lo, hi); `base` must hold all primes up to sqrt(hi)."""
    lo = max(int(lo), 2)
    hi = int(hi)
    if hi <= lo:
        return np.empty(0, dtype=np.int64)
    return _sieve_kernel(lo, hi, np.asarray(base, dtype=np.int64))


@njit(cache=True, nogil=True, inline="always")
def _mix(z):
    z = z ^ (z >> _S30)
    z = z * _C1
    z = z ^ (z >> _S27)
    z = z * _C2
    return z ^ (z >> _S31)


@njit(cache=True, nogil=True)
def _frob_kernel(primes, seed_a, order, bound, all_accept):
    n = primes.shape[0]
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        base = seed_a ^ np.uint64(primes[i])
        ctr = np.uint64(0)
        z = _mix(base)
        if not all_accept:
            while z >= bound:
                ctr += np.uint64(1)
                z = _mix(base + ctr * _B)
        out[i] = np.int64(z % order)
    return out


def frob_indices(primes: np.ndarray, seed: int, order: int) -> np.ndarray:
    """Uniform element index per prime via the keyed mixer with rejection."""
    bound = (2**64 // order) * order
    return _frob_kernel(
        np.asarray(primes, dtype=np.int64),
        np.uint64((seed * MIX_A) & MASK64),
        np.uint64(order),
        np.uint64(bound & MASK64),
        bound == 2**64,
    )


@njit(cache=True, nogil=True, inline="always")
def _minv(x, p):
    # x^(p-2) mod p for prime p
    e = p - 2
    result = 1
    base = x % p
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


@njit(cache=True, nogil=True)
def _pmulmod(a, da, b, db, f, d, p, conv):
    """(a*b) mod f into a fresh array; f monic of degree d, inputs deg < d."""
    for i in range(2 * d - 1):
        conv[i] = 0
    for i in range(da + 1):
        ai = a[i]
        if ai:
            for j in range(db + 1):
                conv[i + j] = (conv[i + j] + ai * b[j]) % p
    for k in range(2 * d - 2, d - 1, -1):
        c = conv[k]
        if c:
            for i in range(d):
                conv[k - d + i] = (conv[k - d + i] - c * f[i]) % p
            conv[k] = 0
    out = np.empty(d, dtype=np.int64)
    for i in range(d):
        out[i] = conv[i]
    return out


@njit(cache=True, nogil=True)
def _deg(a):
    for i in range(a.shape[0] - 1, -1, -1):
        if a[i]:
            return i
    return -1


@njit(cache=True, nogil=True)
def _ddf_one(p, coeffs, d):
    f = np.empty(d + 1, dtype=np.int64)
    for i in range(d + 1):
        f[i] = coeffs[i] % p
    conv = np.empty(2 * d - 1 if d > 1 else 1, dtype=np.int64)
    # h1 = X^p mod f by left-to-right square and multiply
    h1 = np.zeros(d, dtype=np.int64)
    h1[0] = 1
    bits = 0
    t = p
    while t:
        bits += 1
        t >>= 1
    for bit in range(bits - 1, -1, -1):
        h1 = _pmulmod(h1, d - 1, h1, d - 1, f, d, p, conv)
        if (p >> bit) & 1:
            # multiply by X and reduce
            c = h1[d - 1]
            for i in range(d - 1, 0, -1):
                h1[i] = h1[i - 1]
            h1[0] = 0
            if c:
                for i in range(d):
                    h1[i] = (h1[i] - c * f[i]) % p
    # distinct-degree split
    fstar = f.copy()
    ds = d
    hj = h1.copy()
    code = np.uint64(0)
    j = 1
    while ds > 0:
        if ds < 2 * j:
            code += np.uint64(1) << np.uint64(8 * (ds - 1))
            break
        if j > 1:
            # hj = hj(h1) mod f, Horner
            acc = np.zeros(d, dtype=np.int64)
            for k in range(_deg(hj), -1, -1):
                acc = _pmulmod(acc, d - 1, h1, d - 1, f, d, p, conv)
                acc[0] = (acc[0] + hj[k]) % p
            hj = acc
        # u = (hj - X) mod fstar
        u = np.zeros(d + 1, dtype=np.int64)
        for i in range(d):
            u[i] = hj[i]
        u[1] = (u[1] - 1) % p
        du = _deg(u)
        # reduce u mod fstar
        lead_inv = _minv(fstar[ds], p)
        while du >= ds:
            c = (u[du] * lead_inv) % p
            sh = du - ds
            for i in range(ds + 1):
                u[sh + i] = (u[sh + i] - c * fstar[i]) % p
            du = _deg(u)
        # g = gcd(u, fstar), monic
        a = fstar[: ds + 1].copy()
        da = ds
        b = u[: du + 1].copy() if du >= 0 else np.zeros(1, dtype=np.int64)
        db = du
        while db >= 0:
            linv = _minv(b[db], p)
            while da >= db:
                c = (a[da] * linv) % p
                sh = da - db
                for i in range(db + 1):
                    a[sh + i] = (a[sh + i] - c * b[i]) % p
                da = _deg(a)
            ta, tda = b, db
            b, db = a[: da + 1] if da >= 0 else np.zeros(1, dtype=np.int64), da
            a, da = ta, tda
        dg = da
        if dg > 0:
            ginv = _minv(a[dg], p)
            code += np.uint64(dg // j) << np.uint64(8 * (j - 1))
            # fstar //= g  (exact division by monic-normalized g)
            g = a
            q = np.zeros(ds - dg + 1, dtype=np.int64)
            rem = fstar[: ds + 1].copy()
            dr = ds
            while dr >= dg:
                c = (rem[dr] * ginv) % p
                sh = dr - dg
                q[sh] = c
                for i in range(dg + 1):
                    rem[sh + i] = (rem[sh + i] - c * g[i]) % p
                dr = _deg(rem)
            fstar = np.zeros(d + 1, dtype=np.int64)
            for i in range(ds - dg + 1):
                fstar[i] = q[i]
            ds = ds - dg
        j += 1
    return code


@njit(cache=True, nogil=True)
def _ddf_kernel(primes, coeffs, d):
    out = np.empty(primes.shape[0], dtype=np.uint64)
    for i in range(primes.shape[0]):
        out[i] = _ddf_one(primes[i], coeffs, d)
    return out


def ddf_pattern_codes(primes: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    """Factorization-degree pattern code per prime (monic squarefree input).

    The caller must exclude primes dividing the discriminant.
    """
    primes = np.asarray(primes, dtype=np.int64)
    if len(primes) == 0:
        return np.empty(0, dtype=np.uint64)
    if int(primes.max()) >= PRIME_CAP:
        raise ValueError("primes above 2^31 are not supported")
    coeffs = np.asarray(coeffs, dtype=np.int64)
    return _ddf_kernel(primes, coeffs, len(coeffs) - 1)


@njit(cache=True, nogil=True, inline="always")
def _lookup(sorted_keys, key_order, row):
    key = np.uint64(0)
    for j in range(row.shape[0]):
        key |= np.uint64(row[j]) << np.uint64(4 * j)
    pos = np.searchsorted(sorted_keys, key)
    return key_order[pos]


@njit(cache=True, nogil=True)
def _split_kernel(
    perms,
    sorted_keys,
    key_order,
    rep_perms,
    rep_inv_perms,
    coset_of,
    img_class,
    g_indices,
    orders,
    n_src_classes,
    max_f,
):
    n_g = g_indices.shape[0]
    d = perms.shape[1]
    nc = rep_perms.shape[0]
    out = np.zeros((n_g, max_f + 1, n_src_classes), dtype=np.int32)
    tmp = np.empty(d, dtype=np.uint8)
    act = np.empty(nc, dtype=np.int64)
    visited = np.empty(nc, dtype=np.uint8)
    gpows = np.empty((max_f + 1, d), dtype=np.uint8)
    for gi in range(n_g):
        g = g_indices[gi]
        m = orders[g]
        gp = perms[g]
        for j in range(d):
            gpows[0, j] = j
        for k in range(1, m + 1):
            for j in range(d):
                gpows[k, j] = gp[gpows[k - 1, j]]
        for c in range(nc):
            for j in range(d):
                tmp[j] = gp[rep_perms[c, j]]
            act[c] = coset_of[_lookup(sorted_keys, key_order, tmp)]
        for c in range(nc):
            visited[c] = 0
        for c0 in range(nc):
            if visited[c0]:
                continue
            f = 0
            c = c0
            while True:
                visited[c] = 1
                c = act[c]
                f += 1
                if c == c0:
                    break
            for j in range(d):
                tmp[j] = rep_inv_perms[c0, gpows[f, rep_perms[c0, j]]]
            cls = img_class[_lookup(sorted_keys, key_order, tmp)]
            out[gi, f, cls] += 1
    return out


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
    g_indices = np.asarray(g_indices, dtype=np.int64)
    max_f = int(orders[g_indices].max()) if len(g_indices) else 1
    return _split_kernel(
        perms,
        sorted_keys,
        np.asarray(key_order, dtype=np.int64),
        rep_perms,
        rep_inv_perms,
        np.asarray(coset_of, dtype=np.int64),
        np.asarray(img_class, dtype=np.int64),
        g_indices,
        np.asarray(orders, dtype=np.int64),
        n_src_classes,
        max_f,
    )
