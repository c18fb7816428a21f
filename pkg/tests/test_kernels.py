"""Backend agreement: the numba and numpy kernels must emit identical bits."""

import numpy as np
import pytest

from chebbias import polyarith as pa
from chebbias.kernels import base_primes, get_backend, mix_index

NUMBA = get_backend("numba")
NUMPY = get_backend("numpy")
BACKENDS = [NUMBA, NUMPY]


def simple_sieve_oracle(limit):
    flags = [True] * (limit + 1)
    flags[0:2] = [False, False]
    for p in range(2, int(limit**0.5) + 1):
        if flags[p]:
            for m in range(p * p, limit + 1, p):
                flags[m] = False
    return [i for i, f in enumerate(flags) if f]


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda b: b.BACKEND)
def test_sieve_matches_oracle(impl):
    base = base_primes(200)
    got = impl.sieve_range(2, 20000, base)
    assert got.tolist() == simple_sieve_oracle(19999)
    lo, hi = 7919, 10000
    seg = impl.sieve_range(lo, hi, base)
    assert seg.tolist() == [p for p in simple_sieve_oracle(hi - 1) if p >= lo]
    assert impl.sieve_range(50, 50, base).size == 0


def test_sieve_backends_agree():
    base = base_primes(1100)
    for lo, hi in [(2, 10**6), (999000, 1200000), (2, 3)]:
        a = NUMBA.sieve_range(lo, hi, base)
        b = NUMPY.sieve_range(lo, hi, base)
        assert np.array_equal(a, b)


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda b: b.BACKEND)
def test_frob_matches_python_reference(impl):
    primes = impl.sieve_range(2, 5000, base_primes(80))
    for order, seed in [(24, 42), (40320, 7), (3, 123456789)]:
        got = impl.frob_indices(primes, seed, order)
        want = [mix_index(seed, int(p), order) for p in primes]
        assert got.tolist() == want
        assert got.min() >= 0 and got.max() < order


def test_frob_backends_agree_large():
    primes = NUMPY.sieve_range(2, 10**6, base_primes(1100))
    for order in (24, 32, 40320, 2**16):
        a = NUMBA.frob_indices(primes, 42, order)
        b = NUMPY.frob_indices(primes, 42, order)
        assert np.array_equal(a, b)


def test_frob_deterministic_and_seed_sensitive():
    primes = NUMPY.sieve_range(2, 10**5, base_primes(400))
    a1 = NUMPY.frob_indices(primes, 42, 24)
    a2 = NUMPY.frob_indices(primes, 42, 24)
    b = NUMPY.frob_indices(primes, 43, 24)
    assert np.array_equal(a1, a2)
    assert not np.array_equal(a1, b)


def test_frob_uniformity_rough():
    primes = NUMPY.sieve_range(2, 10**6, base_primes(1100))
    idx = NUMPY.frob_indices(primes, 5, 8)
    counts = np.bincount(idx, minlength=8)
    expected = len(primes) / 8
    sigma = (len(primes) * (1 / 8) * (7 / 8)) ** 0.5
    assert np.all(np.abs(counts - expected) < 5 * sigma)


QUARTIC = [-1, -1, 0, 0, 1]  # X^4 - X - 1, little-endian


@pytest.mark.parametrize("impl", BACKENDS, ids=lambda b: b.BACKEND)
def test_ddf_against_reference(impl):
    primes = impl.sieve_range(2, 3000, base_primes(60))
    primes = primes[primes != 283]
    codes = impl.ddf_pattern_codes(primes, np.asarray(QUARTIC, dtype=np.int64))
    for p, c in zip(primes.tolist(), codes.tolist()):
        want = pa.pattern_code(pa.ddf_pattern(QUARTIC, p))
        assert c == want, p
        degs = pa.code_to_pattern(int(c), 4)
        assert sum(degs) == 4


def test_ddf_backends_agree_various_degrees():
    base = base_primes(400)
    primes = NUMPY.sieve_range(2, 10**5, base)
    cases = [
        QUARTIC,
        [-1, -1, 0, 0, 0, 0, 1],      # degree 6
        [1, 1, 0, 1, 0, 0, 0, 0, 1],   # degree 8
        [-2, 0, 1],                    # X^2 - 2
    ]
    for coeffs in cases:
        disc = pa.discriminant(list(reversed(coeffs)))
        good = np.asarray([p for p in primes.tolist() if disc % p], dtype=np.int64)
        a = NUMBA.ddf_pattern_codes(good, np.asarray(coeffs, dtype=np.int64))
        b = NUMPY.ddf_pattern_codes(good, np.asarray(coeffs, dtype=np.int64))
        assert np.array_equal(a, b)


def test_ddf_prime_cap():
    with pytest.raises(ValueError):
        NUMPY.ddf_pattern_codes(
            np.asarray([2**31 + 11], dtype=np.int64), np.asarray(QUARTIC, dtype=np.int64)
        )


def test_split_counts_backends_agree():
    from chebbias import groups as gr
    from chebbias.chebotarev.frobenius import SplitData

    q8 = gr.catalog("Q8")
    _, cay = gr.cayley_embedding(q8)
    sd = SplitData(cay)
    args = sd._kernel_args()
    gidx = np.arange(0, 40320, 97, dtype=np.int64)
    orders = cay.target.orders()
    a = NUMBA.split_counts_batch(*args, gidx, orders, sd.n_src_classes)
    b = NUMPY.split_counts_batch(*args, gidx, orders, sd.n_src_classes)
    assert np.array_equal(a, b)
