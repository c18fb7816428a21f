"""Catalog-wide verification suites behind the `verify` command.

Each suite returns (name, passed, detail) triples; the CLI and the acceptance
tests consume the same functions.
"""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import numpy as np

from . import classfun as cf, props
from .chebotarev import (
    SyntheticSource,
    counting_series,
    inclusion_exclusion_check,
    per_prime_induction_identity,
    telescoping_check,
)
from .chebotarev.frobenius import SplitData
from .groups import (
    FiniteGroup,
    abelian,
    catalog,
    cayley_embedding,
    cyclic,
    direct_product,
    modular_semidirect,
    quotient_group,
    semidirect_product,
    subgroup_closure,
    center,
)

Result = tuple[str, bool, str]


# ---------------------------------------------------------------------------
# group inventories


def abelian_groups_upto(max_order: int):
    """All abelian groups of order <= max_order, as invariant-factor builds."""
    for n in range(1, max_order + 1):
        for parts in _abelian_types(n):
            yield parts, abelian(parts)


def _partitions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in _partitions(n - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def _abelian_types(n: int):
    """Cyclic factor lists for each abelian group of order n (one per type)."""
    factors: dict[int, list[tuple[int, ...]]] = {}
    m = n
    p = 2
    primes = []
    while m > 1:
        if m % p == 0:
            e = 0
            while m % p == 0:
                m //= p
                e += 1
            primes.append((p, e))
        p += 1
    combos = [
        [tuple(p**a for a in part) for part in _partitions(e)] for p, e in primes
    ]
    for choice in itertools.product(*combos) if combos else [()]:
        # merge per-prime cyclic factors into one list (any order; the
        # builders normalize through abelian_invariants where needed)
        merged: list[int] = []
        for tup in choice:
            merged.extend(tup)
        yield tuple(sorted(merged)) if merged else (1,)


def _wreath_cyclic(p: int) -> FiniteGroup:
    """(C_p)^p x| C_p with the acting generator cycling the coordinates."""
    base = direct_product([cyclic(p)] * p)
    gens = base.generators
    images = [gens[(i + 1) % p] for i in range(p)]
    g = semidirect_product(base, cyclic(p), [images])
    g.name = f"C{p}wrC{p}"
    return g


def _semidihedral(order: int) -> FiniteGroup:
    m = order // 2
    u = m // 2 - 1  # acting generator maps x -> x^(2^(k-2) - 1)
    g = semidirect_product(cyclic(m), cyclic(2), [[u % m]])
    g.name = f"SD{order}"
    return g


def _heisenberg(p: int) -> FiniteGroup:
    base = abelian([p, p])
    g0, g1 = base.generators
    images = [base.mul(g0, g1), g1]
    g = semidirect_product(base, cyclic(p), [images])
    g.name = f"Heis{p}"
    return g


def catalog_p_groups(max_order: int = 256):
    """A spread of p-groups from the built-in constructions, up to max_order."""
    out: list[FiniteGroup] = []
    for p in (2, 3, 5, 7):
        n = p
        while n <= max_order:
            for parts in _abelian_types(n):
                out.append(abelian(parts))
            n *= p
    k = 8
    while k <= max_order:
        out.append(catalog(f"D{k}"))
        out.append(catalog(f"Q{k}"))
        if k >= 16:
            out.append(_semidihedral(k))
        k *= 2
    for p, m, n in [(2, 2, 1), (2, 3, 1), (2, 3, 2), (3, 2, 1), (3, 3, 1), (5, 2, 1), (2, 4, 3)]:
        try:
            g = modular_semidirect(p, m, n)
        except Exception:
            continue
        if g.order <= max_order:
            out.append(g)
    for p in (3, 5):
        if p**3 <= max_order:
            out.append(_heisenberg(p))
    if 81 <= max_order:
        out.append(_wreath_cyclic(3))
    for name in ("U(3,2)", "U(3,4)", "U(4,2)"):
        g = catalog(name)
        if g.order <= max_order:
            out.append(g)
    q8c2 = direct_product([catalog("Q8"), cyclic(2)])
    if q8c2.order <= max_order:
        out.append(q8c2)
    q8c4 = direct_product([catalog("Q8"), cyclic(4)])
    if q8c4.order <= max_order:
        out.append(q8c4)
    return out


def _p_of(G: FiniteGroup) -> int:
    n = G.order
    for p in (2, 3, 5, 7, 11, 13):
        if n % p == 0:
            return p
    raise ValueError("not a p-group in the supported range")


# ---------------------------------------------------------------------------
# suites


def suite_abelian(max_order: int = 128) -> list[Result]:
    """Root-count property on abelian groups is equivalent to having a
    non-homocyclic Sylow part, for every prime dividing the order."""
    results: list[Result] = []
    bad = 0
    total = 0
    for parts, G in abelian_groups_upto(max_order):
        n = G.order
        p = 2
        while p <= n:
            if n % p == 0 and props.is_prime(p):
                total += 1
                has_p = props.satisfies_p(G, p) is not None
                non_homo = not props.is_homocyclic(G, p)
                if has_p != non_homo:
                    bad += 1
                    results.append(
                        (f"abelian {parts} p={p}", False, f"P={has_p} homocyclic={not non_homo}")
                    )
            p += 1
    results.append(
        (f"abelian equivalence over {total} (group, prime) pairs", bad == 0, f"{bad} exceptions")
    )
    return results


def suite_caracterisation(max_order: int = 256) -> list[Result]:
    """p-groups: the property holds iff two maximal cyclic subgroups have
    distinct orders."""
    results: list[Result] = []
    bad = 0
    groups = catalog_p_groups(max_order)
    for G in groups:
        p = _p_of(G)
        has_p = props.satisfies_p(G, p) is not None
        orders = props.maximal_cyclic_orders(G)
        distinct = len(set(orders)) >= 2
        if has_p != distinct:
            bad += 1
            results.append((f"caracterisation {G.name}", False, f"P={has_p} orders={orders}"))
    results.append(
        (f"maximal-cyclic criterion over {len(groups)} p-groups", bad == 0, f"{bad} exceptions")
    )
    return results


def suite_carpplus(max_order: int = 256) -> list[Result]:
    """p-groups: the non-normal power criterion agrees with the witness search."""
    results: list[Result] = []
    bad = 0
    groups = catalog_p_groups(max_order)
    for G in groups:
        p = _p_of(G)
        crit = props.satisfies_p_plus(G, p, mode="criterion")
        srch = props.satisfies_p_plus(G, p, mode="search")
        if (crit is None) != (srch is None):
            bad += 1
            results.append(
                (f"carpplus {G.name}", False, f"criterion={crit is not None} search={srch is not None}")
            )
    results.append(
        (f"criterion vs search over {len(groups)} p-groups", bad == 0, f"{bad} exceptions")
    )
    return results


def suite_ord(max_order: int = 256) -> list[Result]:
    results: list[Result] = []
    groups = [G for G in catalog_p_groups(max_order) if not G.is_abelian()]
    bad1 = tested1 = 0
    for G in groups:
        p = _p_of(G)
        e = round(math.log(G.order, p))
        mmax = round(math.log(int(G.orders().max()), p))
        n_exp = e - mmax
        is_q8 = G.order == 8 and int((G.orders() == 2).sum()) == 1
        if 1 <= n_exp < mmax and not is_q8:
            tested1 += 1
            if props.satisfies_p(G, p) is None:
                bad1 += 1
                results.append((f"ord1 {G.name}", False, "no witness"))
    results.append((f"large-order-element criterion on {tested1} groups", bad1 == 0, f"{bad1} exceptions"))
    bad2 = tested2 = 0
    for G in groups:
        p = _p_of(G)
        if int(G.orders().max()) < max(p * p, 8):
            continue
        if G.order * (G.order // p) > 4096:
            continue  # product exceeds the dense backend
        zs = [z for z in center(G) if G.element_order(z) == p]
        if not zs:
            continue
        tested2 += 1
        quotient = quotient_group(G, [zs[0]])
        prod = direct_product([G, quotient])
        if props.satisfies_p(prod, p) is None:
            bad2 += 1
            results.append((f"ord2 {G.name}", False, "no witness on G x G/<a>"))
    results.append((f"quotient-product criterion on {tested2} groups", bad2 == 0, f"{bad2} exceptions"))
    return results


def complete_groups_of_order_upto_7() -> list[FiniteGroup]:
    """Every group of order < 8 up to isomorphism."""
    s3 = catalog("S3")
    return [
        cyclic(1), cyclic(2), cyclic(3), cyclic(4), abelian([2, 2]),
        cyclic(5), cyclic(6), s3, cyclic(7),
    ]


def suite_bounds() -> list[Result]:
    results: list[Result] = []
    small_bad = [G.name for G in complete_groups_of_order_upto_7() if props.satisfies_p(G, 2)]
    results.append(("no order-<8 group has the p=2 property", not small_bad, str(small_bad)))

    bad = []
    for G in catalog_p_groups(128) + [catalog("S4"), catalog("S5"), catalog("A5"), catalog("A6")]:
        for p in (2, 3):
            if G.order % p:
                continue
            w = props.satisfies_p_plus(G, p, mode="search")
            if w is not None and G.order < 3 * p**3:
                bad.append((G.name, p))
    results.append(("ambient order >= 3p^3 whenever the ambient property holds", not bad, str(bad)))

    s4 = catalog("S4")
    w = props.satisfies_p_plus(s4, 2, mode="search")
    attained = w is not None and s4.order == 24 == 2 ** (2 + 1) * (2 ** (2 - 1) + 1)
    results.append(("symmetric-group bound attainment 24 = 2^3 * 3", attained, f"witness={w is not None}"))

    ok = True
    details = []
    for p, n, m, H in [(2, 1, 2, None), (3, 1, 2, None), (2, 1, 2, {"kind": "cyclic", "n": 2})]:
        gplus, emb, a, b = props.construct_gplus_ab(p, n, m, H)
        h_order = emb.source.order // p ** (n + m)
        expect = 2 * p ** (2 * m) * h_order
        ap, bp = int(emb.img[a]), int(emb.img[b])
        conj = gplus.class_of(ap) == gplus.class_of(bp)
        wit = props.PropertyWitness("P", p, a, b, emb.source)
        good = gplus.order == expect and conj and wit.replay()
        ok &= good
        details.append(f"p={p},n={n},m={m}:|G+|={gplus.order}")
    results.append(("swap-container order 2 p^(2m) |H| attained with replayable witness", ok, "; ".join(details)))
    return results


# ---------------------------------------------------------------------------
# randomized lemma suites


def _random_group_pool() -> list[FiniteGroup]:
    pool = [
        catalog("Q8"), catalog("Q16"), catalog("D8"), catalog("D12"), catalog("D16"),
        catalog("S3"), catalog("S4"), catalog("A4"),
        cyclic(12), cyclic(16), abelian([2, 4]), abelian([3, 9]), abelian([2, 2, 4]),
        modular_semidirect(2, 3, 1), _heisenberg(3),
        direct_product([catalog("Q8"), cyclic(3)]),
    ]
    return pool


def suite_nbrac(cases: int = 1000, seed: int = 0xC0FFEE) -> list[Result]:
    rng = random.Random(seed)
    pool = _random_group_pool()
    results: list[Result] = []

    bad = 0
    for _ in range(cases):
        G = rng.choice(pool)
        a = rng.randrange(G.order)
        ell = rng.randrange(2, 30)
        n = G.element_order(a)
        d = math.gcd(ell, n)
        lp = ell // d
        for x in G.elements():
            if G.pow(x, ell) == a:
                o = G.element_order(x)
                if o % (d * n) or (lp % (o // (d * n))):
                    bad += 1
                    break
    results.append((f"root-order lemma, {cases} cases", bad == 0, f"{bad} failures"))

    bad = 0
    sf = [ell for ell in range(2, 31) if props.is_squarefree(ell)]
    for _ in range(cases):
        G = rng.choice(pool)
        ell = rng.choice(sf)
        orders = G.orders()
        part = G.conjugacy()
        buckets: list[dict[int, int]] = [dict() for _ in range(G.order)]
        for y in G.elements():
            tgt = G.pow(y, ell)
            o = int(orders[y])
            buckets[tgt][o] = buckets[tgt].get(o, 0) + 1
        rs = {k: cf.root_count(G, k) for k in range(1, ell + 1) if ell % k == 0}
        for ca in range(part.n_classes):
            for cbd in range(ca + 1, part.n_classes):
                if part.order_of_class(ca) != part.order_of_class(cbd):
                    continue
                if any(rs[k].values[ca] != rs[k].values[cbd] for k in rs):
                    continue
                if buckets[int(part.reps[ca])] != buckets[int(part.reps[cbd])]:
                    bad += 1
    results.append((f"order-restricted root counts, {cases} cases", bad == 0, f"{bad} failures"))

    bad = 0
    small = [g for g in pool if g.order <= 24]
    for _ in range(cases):
        G1 = rng.choice(small)
        G2 = rng.choice(small)
        d = rng.choice([2, 3, 5, 6])
        w = props.satisfies_p(G1, d) if props.is_squarefree(d) else None
        if w is None:
            continue
        prod = direct_product([G1, G2])
        a = w.a * G2.order
        b = w.b * G2.order
        if not props.PropertyWitness("P", d, a, b, prod).replay():
            bad += 1
    results.append((f"direct-product transport, {cases} cases", bad == 0, f"{bad} failures"))

    bad = 0
    ab_pool = [G for G in pool if G.is_abelian()] + [abelian([6, 12]), cyclic(30)]
    for _ in range(cases):
        G = rng.choice(ab_pool)
        a = rng.randrange(G.order)
        m = rng.randrange(1, 12)
        n = rng.randrange(1, 12)
        if math.gcd(m, n) != 1:
            continue
        rm = sum(1 for x in G.elements() if G.pow(x, m) == a)
        rn = sum(1 for x in G.elements() if G.pow(x, n) == a)
        rmn = sum(1 for x in G.elements() if G.pow(x, m * n) == a)
        if rmn != rm * rn:
            bad += 1
    results.append((f"abelian root-count multiplicativity, {cases} cases", bad == 0, f"{bad} failures"))

    bad = 0
    embeddings = _catalog_embeddings()
    for _ in range(cases):
        emb = rng.choice(embeddings)
        G = emb.source
        nclasses = G.conjugacy().n_classes
        values = [Fraction(rng.randrange(-8, 9), rng.randrange(1, 5)) for _ in range(nclasses)]
        t = cf.ClassFunction(G, tuple(values))
        lhs = cf.inner_product(t, cf.one(G))
        tp = cf.induce(t, emb)
        rhs = cf.inner_product(tp, cf.one(emb.target))
        if lhs != rhs:
            bad += 1
    results.append((f"induction reciprocity, {cases} cases", bad == 0, f"{bad} failures"))
    return results


def _catalog_embeddings():
    d8, emb_d8 = dihedral_in_s4()[1:3]
    q8 = catalog("Q8")
    _, cay_q8 = cayley_embedding(q8)
    gplus, emb_ab, _, _ = props.construct_gplus_ab(2, 1, 2)
    a6 = catalog("A6")
    import numpy as _np

    g1 = a6._b.index_of(_np.array([1, 2, 3, 0, 5, 4], dtype=_np.uint8))
    g2 = a6._b.index_of(_np.array([1, 0, 3, 2, 4, 5], dtype=_np.uint8))
    _, emb_a6 = subgroup_closure(a6, [g1, g2])
    return [emb_d8, cay_q8, emb_ab, emb_a6]


def dihedral_in_s4():
    """The 2-Sylow dihedral subgroup of the symmetric group on 4 points,
    with its two same-order double-transposition classes (c_a, c_b)."""
    s4 = catalog("S4")
    sigma = s4._b.index_of(np.array([1, 2, 3, 0], dtype=np.uint8))
    tau = s4._b.index_of(np.array([1, 0, 3, 2], dtype=np.uint8))
    d8, emb = subgroup_closure(s4, [sigma, tau], name="D8<S4")
    tau_s = emb.source_index_of(tau)
    sigma_s = emb.source_index_of(sigma)
    c_a = d8.class_of(tau_s)
    c_b = d8.class_of(d8.mul(sigma_s, sigma_s))
    return s4, d8, emb, c_a, c_b


# ---------------------------------------------------------------------------
# exact-identity suites over synthetic data


def induction_identity_exhaustive(emb, t: cf.ClassFunction, kmax: int = 20) -> bool:
    """Per-prime induction identity for every ambient element, via the batch
    orbit kernel when available."""
    Gp = emb.target
    sd = SplitData(emb)
    t_plus = cf.induce(t, emb)
    if Gp.backend != "perm" or Gp._b.degree > 16:
        return all(
            per_prime_induction_identity(g, t, emb, kmax, cosets=sd.cosets, t_plus=t_plus)
            for g in Gp.elements()
        )
    counts = sd._batch_counts(np.arange(Gp.order, dtype=np.int64))
    tn, td = t.scaled_ints()
    tpn, tpd = t_plus.scaled_ints()
    powcls = cf.power_class_table(emb.source, kmax)
    tpow = tn[powcls[:, : kmax + 1]]  # (src classes, k)
    fmax = counts.shape[1] - 1
    lhs = np.zeros((Gp.order, kmax + 1), dtype=np.int64)
    for k in range(1, kmax + 1):
        for f in range(1, min(fmax, k) + 1):
            if k % f:
                continue
            lhs[:, k] += f * (counts[:, f, :] @ tpow[:, k // f])
    b = Gp._b
    tgt_class = Gp.conjugacy().class_of
    cur = np.tile(np.arange(b.degree, dtype=np.uint8), (Gp.order, 1))
    base = b.perms
    for k in range(1, kmax + 1):
        cur = np.take_along_axis(base, cur, axis=1)
        rhs_k = tpn[tgt_class[b.lookup_rows(cur)]]
        if not np.array_equal(lhs[:, k] * tpd, rhs_k * td):
            return False
    return True


def suite_identities(xmax: int = 10**5, seed: int = 42, threads: int = 1) -> list[Result]:
    results: list[Result] = []
    s4, d8, emb_d8, ca, cb = dihedral_in_s4()
    t_d8 = cf.difference_indicator(d8, ca, cb)
    results.append(
        ("induction identity, all ambient elements (index-3 case)",
         induction_identity_exhaustive(emb_d8, t_d8, 20), "kmax=20")
    )

    q8 = catalog("Q8")
    _, cay = cayley_embedding(q8)
    ci = q8.class_of(q8.generators[0])
    cj = q8.class_of(q8.generators[1])
    t_q8 = cf.difference_indicator(q8, ci, cj)
    results.append(
        ("induction identity, all ambient elements (regular-action case)",
         induction_identity_exhaustive(cay, t_q8, 20), "kmax=20")
    )

    verdict = props.verdict_from_embedding(emb_d8, ca, cb)
    src = SyntheticSource(emb_d8, seed=seed, xmax=xmax, threads=threads)
    series = counting_series(src, t_d8, ca, cb, verdict=verdict)
    acc = series.accumulator
    results.append(
        ("inclusion-exclusion identity on accumulated data",
         inclusion_exclusion_check(acc, t_d8), f"xmax={xmax}")
    )
    ok, info = telescoping_check(acc, ca, cb, 2)
    results.append(("power-residue telescoping (exact weighted form)", ok, f"u={info.get('u')}"))

    gplus, emb_ab, a_idx, b_idx = props.construct_gplus_ab(2, 1, 2)
    G_ab = emb_ab.source
    rng = random.Random(7)
    ok_ind = True
    for _ in range(50):
        vals = tuple(Fraction(rng.randrange(-6, 7)) for _ in range(G_ab.conjugacy().n_classes))
        t_rand = cf.ClassFunction(G_ab, vals)
        tp = cf.induce(t_rand, emb_ab)
        for ell in (1, 3, 5, 7, 9):
            lhs = cf.induce(cf.power_pullback(t_rand, ell), emb_ab)
            rhs = cf.power_pullback(tp, ell)
            if lhs != rhs:
                ok_ind = False
    results.append(("odd-power pullback commutes with induction (2-group ambient)", ok_ind, "50 random functions"))

    results.append(("non-converse regression", _non_converse_regression(), "wreath-style ambient"))
    return results


def _non_converse_regression() -> bool:
    """Product-of-cyclics inside the coordinate-swap extension: the induced
    difference vanishes and square-root counts agree, yet the induced square
    pullback does not vanish."""
    q8 = catalog("Q8")
    q8q8 = direct_product([q8, q8])
    gens = q8q8.generators
    swap_images = [gens[2], gens[3], gens[0], gens[1]]
    gp = semidirect_product(q8q8, cyclic(2), [swap_images])
    i1 = gens[0] * 2  # (i, 1) in the extension
    j2 = gens[3] * 2  # (1, j)
    G, emb = subgroup_closure(gp, [i1, j2], name="<i>x<j>")
    if G.order != 16:
        return False
    m1 = gp.pow(i1, 2)  # (-1, 1)
    m2 = gp.pow(j2, 2)  # (1, -1)
    a = emb.source_index_of(m1)
    b = emb.source_index_of(m2)
    t = cf.indicator(G, G.class_of(a)) - cf.indicator(G, G.class_of(b))
    r2 = cf.root_count(G, 2)
    if r2.values[G.class_of(a)] != r2.values[G.class_of(b)]:
        return False
    if cf.inner_product(t, r2) != 0:
        return False
    if not cf.induce(t, emb).is_zero():
        return False
    return not cf.induce(cf.power_pullback(t, 2), emb).is_zero()


SUITES = {
    "abelian": suite_abelian,
    "caracterisation": suite_caracterisation,
    "carpplus": suite_carpplus,
    "ord": suite_ord,
    "bounds": suite_bounds,
    "nbrac": suite_nbrac,
    "identities": suite_identities,
}


def run_suite(name: str, **kwargs) -> list[Result]:
    if name == "all":
        out: list[Result] = []
        for key, fn in SUITES.items():
            out.extend(_call_suite(key, fn, **kwargs))
        return out
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES) + ['all']}")
    return _call_suite(name, SUITES[name], **kwargs)


def _call_suite(name, fn, xmax=None, cases=None, threads=1):
    if name == "identities":
        return fn(xmax=int(xmax or 10**5), threads=threads)
    if name == "nbrac":
        return fn(cases=int(cases or 1000))
    return fn()
