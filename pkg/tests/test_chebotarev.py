"""Frobenius splitting, sources, exact counting series, and bias thresholds."""

import math
from fractions import Fraction

import numpy as np
import pytest

from chebbias import classfun as cf, groups as gr, props
from chebbias import chebotarev as ch
from chebbias.chebotarev.frobenius import SplitData
from chebbias.verify import dihedral_in_s4


# ---------------------------------------------------------------------------
# integer roots and checkpoints


def test_int_nth_root():
    assert ch.int_nth_root(10**8, 2) == 10**4
    assert ch.int_nth_root(10**8 - 1, 2) == 9999
    assert ch.int_nth_root(2**60, 3) == 2**20
    assert ch.int_nth_root(7, 3) == 1
    assert ch.int_nth_root(1, 5) == 1
    assert ch.int_nth_root(0, 2) == 0
    for x in [10**6, 10**6 + 7, 2**31 - 1]:
        for n in range(1, 22):
            y = ch.int_nth_root(x, n)
            assert y**n <= x < (y + 1) ** n


def test_default_checkpoints():
    pts = ch.default_checkpoints(10**6)
    assert pts[0] >= 2 and pts[-1] == 10**6
    assert pts == sorted(set(pts))
    assert len(pts) <= 100


# ---------------------------------------------------------------------------
# factorization patterns


def test_factorization_pattern_examples():
    assert ch.factorization_pattern([1, 0, 0, -1, -1], 2) == (4,)
    assert ch.factorization_pattern([1, 0, 0, -1, -1], 283) == "ramified"
    with pytest.raises(ValueError):
        ch.factorization_pattern([2, 0, 1], 5)
    for p in (3, 5, 7, 11, 13, 101):
        pat = ch.factorization_pattern([1, 0, 0, -1, -1], p)
        assert sum(pat) == 4


def test_factorization_pattern_small_field_oracle():
    """Brute-force factor degrees over tiny fields by root/divisor counting."""
    coeffs = [1, 0, 0, -1, -1]
    for p in (2, 3, 5, 7):
        roots = [x for x in range(p) if (x**4 - x - 1) % p == 0]
        pat = ch.factorization_pattern(coeffs, p)
        assert pat.count(1) == len(roots)


# ---------------------------------------------------------------------------
# splitting


def test_split_prime_examples():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    cs = gr.coset_space(emb)
    ident = ch.split_prime(0, cs)
    assert ident == [(1, d8.class_of(0))] * 3
    three_cycle = s4._b.index_of(np.array([1, 2, 0, 3], dtype=np.uint8))
    assert ch.split_prime(three_cycle, cs) == [(3, d8.class_of(0))]
    four_cycle = s4._b.index_of(np.array([1, 2, 3, 0], dtype=np.uint8))
    splits = ch.split_prime(four_cycle, cs)
    assert sorted(f for f, _ in splits) == [1, 2]
    sigma_class = d8.class_of(emb.source_index_of(four_cycle))
    assert (1, sigma_class) in splits


def test_split_data_class_function():
    """Splits agree for every member of each ambient class."""
    s4, d8, emb, *_ = dihedral_in_s4()
    sd = SplitData(emb)
    cs = sd.cosets
    part = s4.conjugacy()
    for g in s4.elements():
        assert tuple(ch.split_prime(g, cs)) == sd.splits_for_class(int(part.class_of[g]))


def test_per_prime_induction_identity_exhaustive_small():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    t = cf.difference_indicator(d8, ca, cb)
    for g in s4.elements():
        assert ch.per_prime_induction_identity(g, t, emb, 12)
    assert ch.per_prime_induction_identity(5, cf.one(d8), emb, 8)
    # vanishing induced function: the orbit sums are zero for every power
    tp = cf.induce(t, emb)
    assert tp.is_zero()


# ---------------------------------------------------------------------------
# synthetic source


def test_synthetic_determinism_and_segmentation():
    q8 = gr.catalog("Q8")
    _, cay = gr.cayley_embedding(q8)
    src1 = ch.SyntheticSource(cay, seed=9, xmax=30000, segment=1 << 12)
    src2 = ch.SyntheticSource(cay, seed=9, xmax=30000, segment=997)
    p1 = np.concatenate([p for p, _ in src1.iter_class_segments()])
    c1 = np.concatenate([c for _, c in src1.iter_class_segments()])
    p2 = np.concatenate([p for p, _ in src2.iter_class_segments()])
    c2 = np.concatenate([c for _, c in src2.iter_class_segments()])
    assert np.array_equal(p1, p2)
    assert np.array_equal(c1, c2)
    src3 = ch.SyntheticSource(cay, seed=9, xmax=30000, threads=4)
    c3 = np.concatenate([c for _, c in src3.iter_class_segments()])
    assert np.array_equal(c1, c3)


def test_synthetic_trivial_subgroup():
    triv = gr.cyclic(1)
    s1, emb = gr.cayley_embedding(triv)
    src = ch.SyntheticSource(emb, seed=1, xmax=100)
    recs = list(src.records())
    assert all(r.splits == ((1, 0),) for r in recs)
    assert len(recs) == 25


def test_synthetic_class_frequencies_4sigma():
    s4, d8, emb, *_ = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=11, xmax=10**6)
    acc = ch.ChebotarevAccumulator(src, [10**6], verify=False)
    assert float(acc.frequency_sigmas().max()) < 4.0


def test_records_match_fast_path():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    t = cf.difference_indicator(d8, ca, cb)
    src = ch.SyntheticSource(emb, seed=5, xmax=20000)
    checkpoints = [100, 1234, 5000, 20000]
    series = ch.counting_series(src, t, ca, cb, checkpoints=checkpoints)
    src2 = ch.SyntheticSource(emb, seed=5, xmax=20000)
    ref = ch.counting_series_from_records(src2.records(), emb, t, checkpoints)
    assert series.pi_t == ref


def test_spot_check_catches_tampering():
    s4, d8, emb, *_ = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=5, xmax=5000)
    primes = ch.primes_upto(5000)
    assert src.spot_check(primes)


# ---------------------------------------------------------------------------
# series values and identities


def test_counting_series_zero_function():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=2, xmax=10000)
    z = cf.zero(d8)
    series = ch.counting_series(src, z, ca, cb, checkpoints=[100, 10000], verify=False)
    assert all(v == 0 for v in series.pi_t)
    assert all(v == 0 for v in series.theta_int)
    assert all(v == 0 for v in series.psi_int)


def test_equal_counting_exact_zero():
    q8 = gr.catalog("Q8")
    _, cay = gr.cayley_embedding(q8)
    ci = q8.class_of(q8.generators[0])
    cj = q8.class_of(q8.generators[1])
    t = cf.difference_indicator(q8, ci, cj)
    src = ch.SyntheticSource(cay, seed=31337, xmax=50000)
    series = ch.counting_series(src, t, ci, cj)
    assert all(v == 0 for v in series.pi_t)
    assert all(v == 0 for v in series.theta_int)
    assert all(v == 0 for v in series.psi_int)
    assert series.last_sign_change is None


def test_monotone_for_nonnegative_t():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=8, xmax=30000)
    s = cf.scaled_indicator(d8, cb)
    series = ch.counting_series(src, s, ca, cb, verify=False)
    for a, b in zip(series.pi_t, series.pi_t[1:]):
        assert b >= a
    for a, b in zip(series.psi_int, series.psi_int[1:]):
        assert b >= a


def test_inclusion_exclusion_exact():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=4, xmax=10**5)
    t = cf.difference_indicator(d8, ca, cb)
    series = ch.counting_series(src, t, ca, cb)
    assert ch.inclusion_exclusion_check(series.accumulator, t)
    s = cf.scaled_indicator(d8, cb)
    assert ch.inclusion_exclusion_check(series.accumulator, s)


def test_telescoping_exact_forms():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=42, xmax=10**5)
    t = cf.difference_indicator(d8, ca, cb)
    series = ch.counting_series(src, t, ca, cb)
    ok, info = ch.telescoping_check(series.accumulator, ca, cb, 2)
    assert ok
    assert info["u"] == 1
    # depth-1 decomposition: pi(x; t) = (1/2) pi(sqrt x; s_2) exactly
    s = cf.scaled_indicator(d8, cb)
    acc = series.accumulator
    for x in acc.checkpoints:
        assert acc.pi_t(x, t) == Fraction(1, 2) * acc.pi_t(
            x, cf.power_pullback(s, 2), mult=2
        )
    # the unweighted form misses by exactly the factor p^k
    x = acc.checkpoints[-1]
    lhs = acc.pi_t(x, t)
    rhs_unweighted = acc.pi_t(x, cf.power_pullback(s, 2), mult=2)
    assert rhs_unweighted == 2 * lhs and lhs > 0


def test_telescoping_reports_failed_hypotheses():
    # swapping roles (a has roots) must be rejected
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=1, xmax=3000)
    t = cf.difference_indicator(d8, ca, cb)
    series = ch.counting_series(src, t, ca, cb, verify=False)
    ok, info = ch.telescoping_check(series.accumulator, cb, ca, 2)
    assert not ok and "failed_hypothesis" in info


def test_last_sign_change_tracked():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=42, xmax=10**5)
    t = cf.difference_indicator(d8, ca, cb)
    series = ch.counting_series(src, t, ca, cb)
    # the series starts at zero and turns positive at the first contributing
    # prime square, so a sign change exists and sits on a prime power
    assert series.last_sign_change is not None
    lvl = series.last_sign_change
    root = ch.int_nth_root(lvl, 2)
    assert root * root == lvl or _is_prime(lvl)


def _is_prime(n):
    return n > 1 and all(n % d for d in range(2, int(math.isqrt(n)) + 1))


def test_weighted_class_columns():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=6, xmax=20000)
    t = cf.difference_indicator(d8, ca, cb)
    series = ch.counting_series(src, t, ca, cb, verify=False)
    part = d8.conjugacy()
    w1 = Fraction(d8.order, int(part.sizes[ca]))
    w2 = Fraction(d8.order, int(part.sizes[cb]))
    for i, x in enumerate(series.checkpoints):
        by_class = series.accumulator.pi_by_src_class(x)
        assert series.pi_c1_weighted[i] == w1 * int(by_class[ca])
        assert series.pi_c2_weighted[i] == w2 * int(by_class[cb])
        assert series.pi_t[i] == series.pi_c1_weighted[i] - series.pi_c2_weighted[i]


def test_csv_format():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.SyntheticSource(emb, seed=6, xmax=5000)
    t = cf.difference_indicator(d8, ca, cb)
    v = props.verdict_from_embedding(emb, ca, cb)
    series = ch.counting_series(src, t, ca, cb, verdict=v, verify=False)
    rows = series.csv_rows()
    assert rows[0] == [
        "x", "pi_t", "theta_t_intweight", "psi_t_intweight",
        "pi_C1_weighted", "pi_C2_weighted", "predicted", "ratio",
    ]
    for row in rows[1:]:
        assert len(row) == 8
        float(row[6])  # predicted is numeric in bias runs
    assert all("," not in str(v) for row in rows for v in row)


# ---------------------------------------------------------------------------
# leading term and thresholds


def test_leading_term():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    v = props.verdict_from_embedding(emb, ca, cb)
    t = cf.difference_indicator(d8, ca, cb)
    coeff, curve = ch.leading_term(t, v)
    assert coeff == 2
    assert curve(10**6) == pytest.approx(2 * 1000 / math.log(10**6))
    with pytest.raises(ValueError):
        q8 = gr.catalog("Q8")
        _, cay = gr.cayley_embedding(q8)
        ve = props.classify_dichotomy(cay, q8.class_of(q8.generators[0]), q8.class_of(q8.generators[1]))
        ch.leading_term(t, ve)


def test_leading_term_swap_container():
    gplus, emb, a, b = props.construct_gplus_ab(2, 1, 2)
    G = emb.source
    ca, cb = G.class_of(a), G.class_of(b)
    v = props.verdict_from_embedding(emb, ca, cb)
    assert v is not None and v.case == "ExtremeBias"
    t = cf.difference_indicator(G, ca, cb)
    coeff, _ = ch.leading_term(t, v)
    assert coeff == 4


def test_linnik_bound():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    out = ch.linnik_bound(ch.LinnikInputs(p=2, group=d8, c_b=cb, rd_L=3.0, deg_L=24))
    assert out["r"] == 1
    assert out["norm_bound"] == 8.0
    base = ch.linnik_bound(ch.LinnikInputs(p=2, group=d8, c_b=cb, rd_L=3.0, deg_L=1))
    double = ch.linnik_bound(ch.LinnikInputs(p=2, group=d8, c_b=cb, rd_L=3.0, deg_L=2))
    assert double["A1"] == pytest.approx(base["A1"] * 2**4)
    unit = ch.linnik_bound(
        ch.LinnikInputs(p=2, group=d8, c_b=cb, rd_L=math.e - 2, deg_L=1, B=1.0)
    )
    assert unit["A1"] == pytest.approx(1.0)
    with pytest.raises(ValueError):
        ch.linnik_bound(ch.LinnikInputs(p=2, group=d8, c_b=ca, rd_L=3.0, deg_L=24))


# ---------------------------------------------------------------------------
# quartic source


def test_quartic_pattern_class_dictionary():
    s4, d8, emb, *_ = dihedral_in_s4()
    src = ch.QuarticSource([1, 0, 0, -1, -1], emb, xmax=10**4)
    part = s4.conjugacy()
    # {1,1,2} -> transpositions, {2,2} -> double transpositions
    from chebbias.polyarith import pattern_code

    code_t = pattern_code({1: 2, 2: 1})
    code_dt = pattern_code({2: 2})
    pos_t = int(np.searchsorted(src._codes, np.uint64(code_t)))
    pos_dt = int(np.searchsorted(src._codes, np.uint64(code_dt)))
    cls_t = int(src._code_class[pos_t])
    cls_dt = int(src._code_class[pos_dt])
    assert int(part.sizes[cls_t]) == 6 and part.order_of_class(cls_t) == 2
    assert int(part.sizes[cls_dt]) == 3 and part.order_of_class(cls_dt) == 2


def test_quartic_ramified_and_frequencies():
    s4, d8, emb, ca, cb = dihedral_in_s4()
    src = ch.QuarticSource([1, 0, 0, -1, -1], emb, xmax=10**5)
    t = cf.difference_indicator(d8, ca, cb)
    series = ch.counting_series(src, t, ca, cb, verify=False)
    assert series.meta["skipped_ramified"] == 1
    assert src.ramified_primes == [283]
    assert float(series.accumulator.frequency_sigmas().max()) < 5.0
    assert ch.inclusion_exclusion_check(series.accumulator, t)


def test_quartic_wrong_group_rejected():
    # the cyclic subgroup of S4 misses cycle types: classes not separated is
    # not the failure here; instead feed a polynomial with a smaller Galois
    # group so an unseen pattern appears under a cyclic-group ambient claim
    c4 = gr.perm_group(4, [[1, 2, 3, 0]], name="C4on4")
    whole, emb = gr.subgroup_closure(c4, c4.generators)
    with pytest.raises(Exception):
        src = ch.QuarticSource([1, 0, 0, -1, -1], emb, xmax=2000)
        list(src.iter_class_segments())


def test_quartic_needs_matching_degree():
    s4, d8, emb, *_ = dihedral_in_s4()
    with pytest.raises(Exception):
        ch.QuarticSource([1, 0, -2], emb, xmax=1000)


def test_modes_share_accumulate_path():
    """Synthetic and arithmetic class streams run through the same engine and
    land on the same per-class frequencies within joint noise."""
    s4, d8, emb, ca, cb = dihedral_in_s4()
    t = cf.difference_indicator(d8, ca, cb)
    syn = ch.SyntheticSource(emb, seed=17, xmax=10**5)
    ari = ch.QuarticSource([1, 0, 0, -1, -1], emb, xmax=10**5)
    acc_s = ch.ChebotarevAccumulator(syn, [10**5], t=t, verify=False)
    acc_a = ch.ChebotarevAccumulator(ari, [10**5], t=t, verify=False)
    assert type(acc_s) is type(acc_a)
    fs = acc_s.class_totals / acc_s.n_primes
    fa = acc_a.class_totals / acc_a.n_primes
    sizes = s4.conjugacy().sizes / s4.order
    sigma = np.sqrt(sizes * (1 - sizes) / acc_s.n_primes)
    assert np.all(np.abs(fs - fa) < 8 * sigma)
