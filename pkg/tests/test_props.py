"""Property deciders: root-count properties, the order/conjugacy condition,
dichotomy classification, and the named constructions."""

import numpy as np
import pytest

from chebbias import classfun as cf, groups as gr, props


def d8_in_s4():
    s4 = gr.catalog("S4")
    a = s4._b.index_of(np.array([1, 2, 3, 0], dtype=np.uint8))
    b = s4._b.index_of(np.array([1, 0, 3, 2], dtype=np.uint8))
    return (s4,) + gr.subgroup_closure(s4, [a, b])


# ---------------------------------------------------------------------------
# number-theory helpers


def test_squarefree_and_mobius():
    assert [n for n in range(1, 20) if props.is_squarefree(n)] == [
        1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19,
    ]
    assert [props.mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


# ---------------------------------------------------------------------------
# P(d)


def test_p_property_examples():
    assert props.satisfies_p(gr.catalog("Q8"), 2) is None
    assert props.satisfies_p(gr.abelian([4, 4]), 2) is None
    w = props.satisfies_p(gr.catalog("D8"), 2)
    assert w is not None and (w.a, w.b) == (1, 4)  # tau and the central square
    assert w.replay()


def test_p_property_rejects_bad_d():
    with pytest.raises(ValueError):
        props.satisfies_p(gr.catalog("D8"), 4)
    with pytest.raises(ValueError):
        props.satisfies_p(gr.catalog("D8"), 1)


def test_p_property_composite_d():
    # C2 x C4 has a witness at d = 2; at d = 6 the pair must also match at 2, 3
    g = gr.abelian([2, 4])
    assert props.satisfies_p(g, 2) is not None
    w6 = props.satisfies_p(g, 6)
    if w6 is not None:
        assert w6.replay()


def test_witness_scan_deterministic():
    g = gr.catalog("D16")
    w1 = props.satisfies_p(g, 2)
    w2 = props.satisfies_p(g, 2)
    assert (w1.a, w1.b) == (w2.a, w2.b)


# ---------------------------------------------------------------------------
# P+(p)


def test_p_plus_s4():
    s4 = gr.catalog("S4")
    w = props.satisfies_p_plus(s4, 2, mode="search")
    assert w is not None and w.replay()
    # both elements are double transpositions, conjugate in the ambient group
    ct = lambda e: tuple(sorted(np.bincount(_cycles(s4.perm_of(e)))[1:].tolist()))
    assert s4.class_of(w.a) == s4.class_of(w.b)
    sub = gr.closure(s4, w.subgroup_gens)
    assert len(sub) == 8


def _cycles(p):
    seen = [False] * len(p)
    out = []
    for s in range(len(p)):
        if seen[s]:
            continue
        n, x = 0, s
        while not seen[x]:
            seen[x] = True
            x = int(p[x])
            n += 1
        out.append(n)
    return out


def test_p_plus_d8_none_both_modes():
    d8 = gr.catalog("D8")
    assert props.satisfies_p_plus(d8, 2, mode="criterion") is None
    assert props.satisfies_p_plus(d8, 2, mode="search") is None
    # oracle: all squares in D8 are central
    squares = {d8.pow(x, 2) for x in d8.elements()}
    assert squares <= set(gr.center(d8))


def test_p_plus_unitriangular():
    u = gr.catalog("U(3,4)")
    w = props.satisfies_p_plus(u, 2, mode="criterion")
    assert w is not None and w.replay()


def test_p_plus_criterion_needs_p_group():
    with pytest.raises(ValueError):
        props.satisfies_p_plus(gr.catalog("S4"), 2, mode="criterion")


def test_p_plus_sn_an_thresholds():
    for n in range(2, 8):
        found = props.satisfies_p_plus(gr.catalog(f"S{n}"), 2, mode="search") is not None
        assert found == (n >= 4), f"S{n}"
    for n in range(3, 8):
        found = props.satisfies_p_plus(gr.catalog(f"A{n}"), 2, mode="search") is not None
        assert found == (n >= 6), f"A{n}"


def test_sylow_transport_and_s4_counterexample():
    """A 2-Sylow witness lifts when the Sylow is normal or the witness element
    is central; the symmetric-group pair shows the hypothesis matters."""
    # normal 2-Sylow: D8 x C3
    g = gr.direct_product([gr.catalog("D8"), gr.cyclic(3)])
    syl, emb = gr.sylow_subgroup(g, 2)
    assert gr.is_normal(g, emb.img.tolist())
    w = props.satisfies_p(syl, 2)
    assert w is not None
    lifted = props.PropertyWitness("P", 2, int(emb.img[w.a]), int(emb.img[w.b]), g)
    assert lifted.replay()
    # central witness element: S3 x Q8 with a = (tau, 1) is not applicable;
    # instead C2 x Q8 sylow in S3 x Q8-style product via the centrality route
    g2 = gr.direct_product([gr.catalog("S3"), gr.catalog("Q8")])
    syl2, emb2 = gr.sylow_subgroup(g2, 2)
    w2 = props.satisfies_p(syl2, 2)
    assert w2 is not None
    a_g = int(emb2.img[w2.a])
    conj_in_syl = {g2.conj(x, a_g) for x in g2.elements()} & set(int(v) for v in emb2.img)
    sq_in_syl = {syl2.pow(x, 2) for x in syl2.elements()}
    img_list = emb2.img.tolist()
    if all(syl2.class_of(img_list.index(c)) not in
           {syl2.class_of(s) for s in sq_in_syl} for c in conj_in_syl):
        lifted2 = props.PropertyWitness("P", 2, a_g, int(emb2.img[w2.b]), g2)
        assert lifted2.replay()
    # regression: the 2-Sylow of S4 has a witness pair of double
    # transpositions that are conjugate in S4, so that pair cannot replay there
    s4, d8, emb_d8 = d8_in_s4()
    r2 = cf.root_count(d8, 2)
    part = d8.conjugacy()
    ca = next(c for c in range(part.n_classes)
              if part.order_of_class(c) == 2 and int(part.sizes[c]) == 2
              and r2.values[c] == 0
              and _cycles(s4.perm_of(int(emb_d8.img[int(part.reps[c])]))).count(2) == 2)
    cb = next(c for c in range(part.n_classes)
              if int(part.sizes[c]) == 1 and part.order_of_class(c) == 2)
    a_d8, b_d8 = int(part.reps[ca]), int(part.reps[cb])
    assert props.PropertyWitness("P", 2, a_d8, b_d8, d8).replay()
    pair = props.PropertyWitness(
        "P", 2, int(emb_d8.img[a_d8]), int(emb_d8.img[b_d8]), s4
    )
    assert s4.class_of(pair.a) == s4.class_of(pair.b)
    assert not pair.replay()


# ---------------------------------------------------------------------------
# order/conjugacy condition and dichotomy


def test_star_condition():
    q8 = gr.catalog("Q8")
    _, cay = gr.cayley_embedding(q8)
    assert props.star_condition(cay)
    s4, d8, emb = d8_in_s4()
    assert not props.star_condition(emb)
    v4 = gr.abelian([2, 2])
    whole, emb_self = gr.subgroup_closure(v4, v4.generators)
    assert not props.star_condition(emb_self)


def test_classify_q8_equal_counting():
    q8 = gr.catalog("Q8")
    _, cay = gr.cayley_embedding(q8)
    order4 = [c for c in range(q8.conjugacy().n_classes)
              if q8.conjugacy().order_of_class(c) == 4]
    for c1 in order4:
        for c2 in order4:
            if c1 == c2:
                continue
            v = props.classify_dichotomy(cay, c1, c2)
            assert v.case == "EqualCounting"


def test_classify_q8z4_bias():
    g = gr.direct_product([gr.catalog("Q8"), gr.cyclic(4)])
    minus1 = next(i for i in gr.catalog("Q8").elements()
                  if gr.catalog("Q8").element_order(i) == 2)
    ca = g.class_of(2)           # (1, 2)
    cb = g.class_of(minus1 * 4)  # (-1, 0)
    v = props.classify_dichotomy(props.VirtualCayley(g), ca, cb)
    assert v.case == "ExtremeBias"
    assert v.d == 2 and v.mu_d == -1
    assert v.coefficient == 4 - 12
    assert v.favored_class == ca


def test_classify_modular_family():
    for p, m, n in [(2, 2, 1), (3, 2, 1)]:
        g = gr.modular_semidirect(p, m, n)
        a = g.class_of(g.generators[1])            # (0, 1)
        b = g.class_of(g.pow(g.generators[0], p ** (m - n)))  # (p^(m-n), 0)
        v = props.classify_dichotomy(props.VirtualCayley(g), a, b)
        assert v.case == "ExtremeBias" and v.d == p
        assert v.favored_class == a
    # with an extra direct factor the same pair still certifies the bias
    gh = gr.direct_product([gr.modular_semidirect(2, 2, 1), gr.cyclic(2)])
    a = gh.class_of(gh.generators[1])             # (0, 1, 0)
    b = gh.class_of(gh.pow(gh.generators[0], 2))  # (2, 0, 0)
    v = props.classify_dichotomy(props.VirtualCayley(gh), a, b)
    assert v.case == "ExtremeBias" and v.d == 2 and v.favored_class == a


def test_classify_requires_same_order():
    q8 = gr.catalog("Q8")
    _, cay = gr.cayley_embedding(q8)
    with pytest.raises(ValueError):
        props.classify_dichotomy(cay, q8.class_of(0), q8.class_of(q8.generators[0]))


def test_verdict_from_embedding_d8():
    s4, d8, emb = d8_in_s4()
    part = d8.conjugacy()
    r2 = cf.root_count(d8, 2)
    ca = next(c for c in range(part.n_classes)
              if part.order_of_class(c) == 2 and r2.values[c] == 0
              and int(part.sizes[c]) == 2
              and _cycles(s4.perm_of(int(emb.img[int(part.reps[c])]))).count(2) == 2)
    cb = next(c for c in range(part.n_classes)
              if int(part.sizes[c]) == 1 and part.order_of_class(c) == 2)
    v = props.verdict_from_embedding(emb, ca, cb)
    assert v is not None and v.case == "ExtremeBias"
    assert v.d == 2 and v.mu_d * v.coefficient == 2
    # the un-fused involution pair certifies nothing
    c_other = next(c for c in range(part.n_classes)
                   if part.order_of_class(c) == 2 and c not in (ca, cb))
    assert props.verdict_from_embedding(emb, c_other, cb) is None


# ---------------------------------------------------------------------------
# structural deciders


def test_homocyclic():
    assert not props.is_homocyclic(gr.abelian([2, 4]), 2)
    assert props.is_homocyclic(gr.abelian([9, 9]), 3)
    assert props.is_homocyclic(gr.abelian([6, 12]), 3)
    assert not props.is_homocyclic(gr.abelian([6, 12]), 2)
    with pytest.raises(ValueError):
        props.is_homocyclic(gr.catalog("D8"), 2)


def test_maximal_cyclic_orders():
    assert props.maximal_cyclic_orders(gr.catalog("Q8")) == [4, 4, 4]
    assert props.maximal_cyclic_orders(gr.cyclic(12)) == [12]
    assert props.maximal_cyclic_orders(gr.catalog("D8")) == [4, 2, 2]


def test_q_group_and_dedekind():
    assert props.is_dedekind(gr.catalog("Q8"))
    assert props.is_q_group(gr.catalog("Q16"))
    assert props.satisfies_p(gr.catalog("Q16"), 2) is not None
    ab = gr.abelian([2, 4])
    assert props.is_dedekind(ab)
    assert not props.is_q_group(ab)
    assert not props.is_dedekind(gr.catalog("S4"))


def test_conjugate_in_normalizer():
    d8 = gr.catalog("D8")
    tau = 1
    b = props.conjugate_in_normalizer(d8, tau)
    span = set(gr._cyclic_span(d8, tau))
    assert b not in span
    assert b in set(gr.normalizer(d8, span))
    assert d8.class_of(b) == d8.class_of(tau)
    # the heisenberg-style group of order 8 behaves the same way
    u32 = gr.catalog("U(3,2)")
    x = next(g for g in u32.elements()
             if not gr.is_normal(u32, gr._cyclic_span(u32, g)))
    bb = props.conjugate_in_normalizer(u32, x)
    assert u32.class_of(bb) == u32.class_of(x)
    # central element: its span is normal, so the call errors
    with pytest.raises(ValueError):
        props.conjugate_in_normalizer(d8, d8.element_from_word("g0^2"))
    with pytest.raises(ValueError):
        props.conjugate_in_normalizer(gr.catalog("S4"), 1)


# ---------------------------------------------------------------------------
# constructions


def test_construct_gplus_ab():
    gplus, emb, a, b = props.construct_gplus_ab(2, 1, 2)
    G = emb.source
    assert gplus.order == 32
    assert gr.abelian_invariants(G) == [2, 4]
    ap, bp = int(emb.img[a]), int(emb.img[b])
    assert gplus.class_of(ap) == gplus.class_of(bp)
    assert props.PropertyWitness("P", 2, a, b, G).replay()

    gp3, _, _, _ = props.construct_gplus_ab(3, 1, 2)
    assert gp3.order == 2 * 3**4 == 162
    gph, embh, _, _ = props.construct_gplus_ab(2, 1, 2, {"kind": "cyclic", "n": 2})
    assert gph.order == 64


def test_construct_gplus_ab_validation():
    with pytest.raises(ValueError):
        props.construct_gplus_ab(2, 2, 2)
    with pytest.raises(ValueError):
        props.construct_gplus_ab(2, 1, 2, {"kind": "catalog", "name": "S3"})


def test_construct_appendix_group():
    m2 = props.construct_appendix_group(2)
    assert m2.gamma.order == 32
    m3 = props.construct_appendix_group(3)
    assert m3.gamma.order == 256
    # witness replay: sigma1 has no square root in the subgroup, sigma2 does
    for model in (m2, m3):
        G = model.g_embedding.source
        s1 = model.g_embedding.source_index_of(model.sigma1)
        s2 = model.g_embedding.source_index_of(model.sigma2)
        roots1 = [x for x in G.elements() if G.pow(x, 2) == s1]
        roots2 = [x for x in G.elements() if G.pow(x, 2) == s2]
        assert not roots1 and roots2
        # conjugate in the inner ambient group via the swap
        inner = model.gplus_embedding.source
        i1 = model.gplus_embedding.source_index_of(model.sigma1)
        i2 = model.gplus_embedding.source_index_of(model.sigma2)
        assert inner.class_of(i1) == inner.class_of(i2)


def test_appendix_fifth_power_action():
    m3 = props.construct_appendix_group(3)
    gamma = m3.gamma
    inner_emb = m3.gplus_embedding
    gamma1 = int(inner_emb.img[inner_emb.source.generators[0]])
    tau = gamma.generators[-1]
    lhs = gamma.conj(tau, gamma1)
    assert lhs == gamma.pow(gamma1, 5)
