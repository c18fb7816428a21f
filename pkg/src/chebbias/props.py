"""Deciders for the bias-enabling group properties, plus named constructions.

A group has property P(d) when two same-order elements disagree on d-th root
counts in the strongest way (one count is zero) while agreeing on every
smaller squarefree root count.  P+(p) asks for such a pair inside a subgroup,
with the pair conjugate in the ambient group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import classfun as cf
from .groups import (
    FiniteGroup,
    GroupEmbedding,
    abelian_invariants,
    build_group,
    closure,
    cyclic,
    direct_product,
    is_nilpotent,
    is_normal,
    normalizer,
    semidirect_product,
    subgroup_closure,
    _cyclic_span,
    _quotient_with_reps,
)


def is_squarefree(n: int) -> bool:
    if n < 1:
        return False
    d = 2
    while d * d <= n:
        if n % (d * d) == 0:
            return False
        while n % d == 0:
            n //= d
        d += 1
    return True


def mobius(n: int) -> int:
    if n == 1:
        return 1
    count = 0
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            count += 1
        d += 1
    if n > 1:
        count += 1
    return (-1) ** count


def is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(math.isqrt(n)) + 1))


def _is_p_group(G: FiniteGroup, p: int) -> bool:
    n = G.order
    while n % p == 0:
        n //= p
    return n == 1


# ---------------------------------------------------------------------------
# witnesses


@dataclass(eq=False)
class PropertyWitness:
    """Replayable evidence for P(d) or P+(p).

    `a` is the element with no d-th roots, `b` the one with d-th roots; for
    P+ both live in `gplus` and `subgroup_gens` spans the witness subgroup.
    """

    kind: str
    d: int
    a: int
    b: int
    group: FiniteGroup
    gplus: FiniteGroup | None = None
    subgroup_gens: tuple[int, ...] = ()
    criterion_x: int | None = None

    def replay(self) -> bool:
        """Re-check the raw definition, avoiding every criterion shortcut."""
        if self.kind == "P":
            return _check_p_pair(self.group, self.a, self.b, self.d)
        if self.kind != "Pplus":
            return False
        Gp = self.gplus if self.gplus is not None else self.group
        if Gp.class_of(self.a) != Gp.class_of(self.b):
            return False
        H, emb = subgroup_closure(Gp, self.subgroup_gens)
        img = emb.img.tolist()
        if self.a not in img or self.b not in img:
            return False
        a_h = img.index(self.a)
        b_h = img.index(self.b)
        return _check_p_pair(H, a_h, b_h, self.d)

    def to_json(self) -> dict:
        Gp = self.gplus if self.gplus is not None else self.group
        out = {
            "kind": self.kind,
            "d": self.d,
            "a": Gp.word(self.a) if self.kind == "Pplus" else self.group.word(self.a),
            "b": Gp.word(self.b) if self.kind == "Pplus" else self.group.word(self.b),
        }
        if self.kind == "Pplus":
            out["subgroup_gens"] = [Gp.word(g) for g in self.subgroup_gens]
            if self.criterion_x is not None:
                out["criterion_x"] = Gp.word(self.criterion_x)
        return out


def _check_p_pair(G: FiniteGroup, a: int, b: int, d: int) -> bool:
    """Raw definition of P(d) for the pair (a, b) in G."""
    if G.element_order(a) != G.element_order(b):
        return False
    rd = cf.root_count(G, d)
    ca, cb = G.class_of(a), G.class_of(b)
    if not (rd.values[ca] == 0 < rd.values[cb]):
        return False
    for ell in range(2, d):
        if not is_squarefree(ell):
            continue
        r = cf.root_count(G, ell)
        if r.values[ca] != r.values[cb]:
            return False
    return True


def satisfies_p(G: FiniteGroup, d: int) -> PropertyWitness | None:
    """First same-order class pair (a, b) with 0 = r_d(a) < r_d(b) and equal
    smaller squarefree root counts; None if there is none."""
    if d < 2 or not is_squarefree(d):
        raise ValueError(f"d must be squarefree and >= 2, got {d}")
    part = G.conjugacy()
    rd = cf.root_count(G, d)
    orders = [part.order_of_class(c) for c in range(part.n_classes)]
    use_simple = is_prime(d) and (d == 2 or _is_p_group(G, d))
    smaller = [] if use_simple else [
        ell for ell in range(2, d) if is_squarefree(ell)
    ]
    r_small = {ell: cf.root_count(G, ell) for ell in smaller}
    for ca in range(part.n_classes):
        if rd.values[ca] != 0:
            continue
        for cb in range(part.n_classes):
            if cb == ca or orders[ca] != orders[cb]:
                continue
            if rd.values[cb] == 0:
                continue
            if all(
                r_small[ell].values[ca] == r_small[ell].values[cb]
                for ell in smaller
            ):
                w = PropertyWitness(
                    "P", d, int(part.reps[ca]), int(part.reps[cb]), G
                )
                if not w.replay():
                    raise AssertionError(
                        "simplified criterion disagrees with the raw definition"
                    )
                return w
    return None


def _p_roots(G: FiniteGroup, p: int) -> list[list[int]]:
    roots: list[list[int]] = [[] for _ in G.elements()]
    for y in G.elements():
        roots[G.pow(y, p)].append(y)
    return roots


def _pair_ok_in_subset(
    G: FiniteGroup, elems, a: int, b: int, p: int
) -> bool:
    """P(p) for the pair (a, b) inside the subgroup given by its element set."""
    if G.element_order(a) != G.element_order(b):
        return False
    counts = {a: 0, b: 0}
    for h in elems:
        t = G.pow(h, p)
        if t in counts:
            counts[t] += 1
    if not (counts[a] == 0 < counts[b]):
        return False
    for ell in range(2, p):
        if not is_squarefree(ell):
            continue
        ra = rb = 0
        for h in elems:
            t = G.pow(h, ell)
            if t == a:
                ra += 1
            elif t == b:
                rb += 1
        if ra != rb:
            return False
    return True


def satisfies_p_plus(
    Gp: FiniteGroup, p: int, mode: str = "search"
) -> PropertyWitness | None:
    """Witness for P+(p): conjugate elements a, b and a subgroup where (a, b)
    realizes P(p).

    mode "criterion" (p-groups only) scans for x with a non-normal <x^p> and
    rebuilds a concrete witness from it; mode "search" scans conjugate pairs
    and subgroups of the form <a, y> with y a p-th root of b.  The search
    shape is sound but possibly incomplete outside p-groups, so None means
    "not found" there.
    """
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if mode == "criterion":
        if not _is_p_group(Gp, p):
            raise ValueError("criterion mode needs a p-group")
        for x in Gp.elements():
            xp = Gp.pow(x, p)
            span = _cyclic_span(Gp, xp)
            if is_normal(Gp, span):
                continue
            w = _witness_from_criterion(Gp, p, x)
            if w is None:
                raise AssertionError("criterion element produced no witness")
            return w
        return None
    if mode != "search":
        raise ValueError(f"unknown mode {mode!r}")
    part = Gp.conjugacy()
    roots = _p_roots(Gp, p)
    for c in range(part.n_classes):
        a = int(part.reps[c])
        members = sorted(int(m) for m in part.members(c))
        for b in members:
            if b == a:
                continue
            for y in roots[b]:
                elems = closure(Gp, [a, y])
                if not _pair_ok_in_subset(Gp, elems, a, b, p):
                    continue
                w = PropertyWitness(
                    "Pplus", p, a, b, Gp, gplus=Gp, subgroup_gens=(a, y)
                )
                if not w.replay():
                    raise AssertionError("search witness failed replay")
                return w
    return None


def _witness_from_criterion(Gp: FiniteGroup, p: int, x: int) -> PropertyWitness | None:
    a = Gp.pow(x, p)
    b = conjugate_in_normalizer(Gp, a)
    h1 = closure(Gp, [x, b])
    y_candidates = [y for y in h1 if Gp.pow(y, p) == b]
    if not y_candidates:
        # b has no p-th root in <x, b> while a has one (namely x)
        w = PropertyWitness(
            "Pplus", p, b, a, Gp, gplus=Gp, subgroup_gens=(x, b), criterion_x=x
        )
        return w if w.replay() else None
    for y in y_candidates:
        elems = closure(Gp, [a, y])
        if _pair_ok_in_subset(Gp, elems, a, b, p):
            w = PropertyWitness(
                "Pplus", p, a, b, Gp, gplus=Gp, subgroup_gens=(a, y), criterion_x=x
            )
            if w.replay():
                return w
    return None


# ---------------------------------------------------------------------------
# the order-vs-conjugacy condition and the counting dichotomy


@dataclass(eq=False)
class VirtualCayley:
    """Stands for the left-translation embedding of a group into the full
    symmetric group on its elements, without materializing the target.

    Same-order elements map to permutations of equal cycle type, hence are
    conjugate in the target; the order/conjugacy condition holds for free.
    """

    group: FiniteGroup


def star_condition(emb: GroupEmbedding | VirtualCayley) -> bool:
    """True when image elements of equal order are conjugate in the target."""
    if isinstance(emb, VirtualCayley):
        return True
    tgt_class = emb.target.conjugacy().class_of
    orders = emb.source.orders()
    seen: dict[int, int] = {}
    for s in emb.source.elements():
        o = int(orders[s])
        c = int(tgt_class[emb.img[s]])
        if seen.setdefault(o, c) != c:
            return False
    return True


@dataclass(eq=False)
class DichotomyVerdict:
    """Outcome for a same-order class pair: equal counting, or a bias with its
    minimal squarefree root index d and exact leading coefficient."""

    case: str  # "EqualCounting" | "ExtremeBias"
    c1: int
    c2: int
    d: int | None = None
    mu_d: int | None = None
    coefficient: Fraction | None = None
    favored_class: int | None = None

    def to_json(self) -> dict:
        out = {"case": self.case, "c1": self.c1, "c2": self.c2}
        if self.case == "ExtremeBias":
            out.update(
                d=self.d,
                mu_d=self.mu_d,
                coefficient=str(self.coefficient),
                favored_class=self.favored_class,
            )
        return out


SQUAREFREE_SCAN_FACTOR = 4


def _squarefree_residues(exp: int) -> list[int]:
    """Residues m mod exp (1..exp, exp standing for 0) whose class contains a
    squarefree integer: gcd(m, exp) must be squarefree."""
    return [m for m in range(1, exp + 1) if is_squarefree(math.gcd(m, exp))]


def classify_dichotomy(
    emb: GroupEmbedding | VirtualCayley, c1: int, c2: int
) -> DichotomyVerdict:
    """Decide equal counting vs extreme bias for two same-order classes.

    Requires the order/conjugacy condition on the embedding.  Root counts
    depend on the root index only through its residue mod the group exponent,
    so the universal check runs over residues whose class contains a
    squarefree integer.
    """
    if not star_condition(emb):
        raise ValueError("embedding does not satisfy the order/conjugacy condition")
    G = emb.group if isinstance(emb, VirtualCayley) else emb.source
    part = G.conjugacy()
    if c1 == c2:
        raise ValueError("classes must differ")
    if part.order_of_class(c1) != part.order_of_class(c2):
        raise ValueError("classes must have the same element order")
    exp = G.exponent()
    differing: set[int] = set()
    for m in _squarefree_residues(exp):
        r = cf.root_count(G, m)
        if r.values[c1] != r.values[c2]:
            differing.add(m % exp)
    if not differing:
        return DichotomyVerdict("EqualCounting", c1, c2)
    d = 2
    cap = SQUAREFREE_SCAN_FACTOR * exp * exp + exp
    while not (is_squarefree(d) and d % exp in differing):
        d += 1
        if d > cap:
            raise AssertionError("no squarefree representative found below cap")
    rd = cf.root_count(G, d)
    coeff = rd.values[c1] - rd.values[c2]
    mu = mobius(d)
    favored = c1 if mu * coeff > 0 else c2
    return DichotomyVerdict(
        "ExtremeBias", c1, c2, d=d, mu_d=mu, coefficient=coeff, favored_class=favored
    )


def bias_hypotheses_hold(
    emb: GroupEmbedding, t: cf.ClassFunction, d: int
) -> bool:
    """Exact check that induced pullbacks vanish for every squarefree power
    index below d (the asymptotic-leading-term hypotheses)."""
    for ell in range(1, d):
        if not is_squarefree(ell):
            continue
        if not cf.induce(cf.power_pullback(t, ell), emb).is_zero():
            return False
    return True


def verdict_from_embedding(
    emb: GroupEmbedding | VirtualCayley, c1: int, c2: int
) -> DichotomyVerdict | None:
    """Bias verdict for a concrete embedding.

    Under the order/conjugacy condition this is the dichotomy classification.
    Otherwise the leading-term hypotheses are verified exactly: locate the
    minimal squarefree d with differing root counts, require the induced
    pullbacks below d to vanish; equal counting requires vanishing at every
    squarefree residue.  Returns None when neither route certifies a verdict.
    """
    if star_condition(emb):
        return classify_dichotomy(emb, c1, c2)
    G = emb.source
    part = G.conjugacy()
    if part.order_of_class(c1) != part.order_of_class(c2):
        raise ValueError("classes must have the same element order")
    t = cf.difference_indicator(G, c1, c2)
    exp = G.exponent()
    differing: set[int] = set()
    for m in _squarefree_residues(exp):
        r = cf.root_count(G, m)
        if r.values[c1] != r.values[c2]:
            differing.add(m % exp)
    if not differing:
        for m in _squarefree_residues(exp):
            if not cf.induce(cf.power_pullback(t, m), emb).is_zero():
                return None
        return DichotomyVerdict("EqualCounting", c1, c2)
    d = 2
    cap = SQUAREFREE_SCAN_FACTOR * exp * exp + exp
    while not (is_squarefree(d) and d % exp in differing):
        d += 1
        if d > cap:
            raise AssertionError("no squarefree representative found below cap")
    if not bias_hypotheses_hold(emb, t, d):
        return None
    rd = cf.root_count(G, d)
    coeff = rd.values[c1] - rd.values[c2]
    mu = mobius(d)
    favored = c1 if mu * coeff > 0 else c2
    return DichotomyVerdict(
        "ExtremeBias", c1, c2, d=d, mu_d=mu, coefficient=coeff, favored_class=favored
    )


# ---------------------------------------------------------------------------
# structural deciders


def is_homocyclic(G: FiniteGroup, p: int) -> bool:
    """True when the p-primary parts of the invariant factors are all equal
    (or p does not divide the order)."""
    if not G.is_abelian():
        raise ValueError("homocyclicity is decided for abelian groups only")
    exps = []
    for d in abelian_invariants(G):
        v = 0
        while d % p == 0:
            d //= p
            v += 1
        if v:
            exps.append(v)
    return len(set(exps)) <= 1


def maximal_cyclic_orders(G: FiniteGroup) -> list[int]:
    """Orders of the maximal cyclic subgroups, one entry per conjugacy class
    of subgroups, sorted descending."""
    spans: dict[frozenset, int] = {}
    for g in G.elements():
        span = frozenset(_cyclic_span(G, g))
        if span not in spans:
            spans[span] = len(span)
    span_list = sorted(spans, key=len, reverse=True)
    maximal = [
        s
        for s in span_list
        if not any(s < other for other in span_list if len(other) > len(s))
    ]
    seen: set[frozenset] = set()
    orders = []
    for s in maximal:
        if s in seen:
            continue
        orbit = {frozenset(G.conj(g, x) for x in s) for g in G.elements()}
        seen |= orbit
        orders.append(len(s))
    return sorted(orders, reverse=True)


def is_dedekind(G: FiniteGroup) -> bool:
    """Every subgroup normal; it is enough to test the cyclic ones."""
    return all(is_normal(G, _cyclic_span(G, g)) for g in G.elements())


def is_q_group(G: FiniteGroup) -> bool:
    """2-group with an index-2 abelian subgroup, containing an element of
    order > 2, inverted by some element of order 4.

    Index-2 subgroups are the kernels of the nontrivial characters of the
    elementary abelian quotient by the subgroup generated by all squares.
    """
    if not _is_p_group(G, 2) or G.order < 8:
        return False
    squares = sorted({G.pow(g, 2) for g in G.elements()})
    if len(closure(G, squares)) == G.order:
        return False
    Q, _, coset_of = _quotient_with_reps(G, squares)
    basis: list[int] = []
    for q in Q.elements():
        if q not in closure(Q, basis or [0]):
            basis.append(q)
    coords = np.zeros(Q.order, dtype=np.int64)
    frontier = [0]
    seen = {0}
    while frontier:
        nxt = []
        for x in frontier:
            for i, b in enumerate(basis):
                y = Q.mul(x, b)
                if y not in seen:
                    seen.add(y)
                    coords[y] = coords[x] ^ (1 << i)
                    nxt.append(y)
        frontier = nxt
    elem_coords = coords[np.asarray(coset_of, dtype=np.int64)[: G.order]]
    for mask in range(1, 1 << len(basis)):
        chi = np.array(
            [int(c & mask).bit_count() & 1 for c in elem_coords], dtype=np.int64
        )
        A = [x for x in G.elements() if chi[x] == 0]
        if not any(G.element_order(u) > 2 for u in A):
            continue
        if not all(G.mul(u, v) == G.mul(v, u) for u in A for v in A):
            continue
        for x in G.elements():
            if chi[x] == 0 or G.element_order(x) != 4:
                continue
            if all(G.conj(x, u) == G.inv(u) for u in A):
                return True
    return False


def conjugate_in_normalizer(Gp: FiniteGroup, a: int) -> int:
    """A conjugate of a lying in the normalizer of <a> but outside <a>.

    Exists whenever the group is nilpotent and <a> is not normal.
    """
    if not is_nilpotent(Gp):
        raise ValueError("group is not nilpotent")
    span = _cyclic_span(Gp, a)
    if is_normal(Gp, span):
        raise ValueError("<a> is normal; no outside conjugate in its normalizer")
    span_set = set(span)
    norm = set(normalizer(Gp, span))
    part = Gp.conjugacy()
    for b in sorted(int(m) for m in part.members(Gp.class_of(a))):
        if b in norm and b not in span_set:
            return b
    raise AssertionError("nilpotent normalizer climb found no conjugate")


# ---------------------------------------------------------------------------
# named constructions


def construct_gplus_ab(
    p: int, n: int, m: int, H: FiniteGroup | dict | str | None = None
) -> tuple[FiniteGroup, GroupEmbedding, int, int]:
    """Swap-action container for the abelian family.

    Returns (Gplus, embedding of G = E_n x E_m x H, a, b) where Gplus is
    (C_{p^m} x C_{p^m} x H) x| C2 with the involution swapping the first two
    coordinates, and a, b are the witness pair (indices in G).
    """
    if not (is_prime(p) and 1 <= n < m):
        raise ValueError("need p prime and 1 <= n < m")
    if H is None:
        H = cyclic(1)
    elif not isinstance(H, FiniteGroup):
        H = build_group(H)
    if not H.is_abelian():
        raise ValueError("H must be abelian")
    pm = p**m
    order = 2 * pm * pm * H.order
    if order > 10**6:
        raise ValueError("construction exceeds the order cap")
    base = direct_product([cyclic(pm), cyclic(pm), H])
    # generator layout: [first C_{p^m}, second C_{p^m}, H generators...]
    gens = base.generators
    swap_images = [gens[1], gens[0]] + gens[2:]
    gplus = semidirect_product(base, cyclic(2), [swap_images])
    gplus.name = f"(C{pm}xC{pm}x{H.name})x|C2"
    nh = H.order
    two = 2

    def embed(x: int, y: int, h: int) -> int:
        return (((x * pm) + y) * nh + h) * two

    a_plus = embed(p ** (m - n), 0, 0)
    b_plus = embed(0, p ** (m - n), 0)
    sub_gens = [embed(p ** (m - n), 0, 0), embed(0, 1, 0)] + [
        embed(0, 0, h) for h in H.generators
    ]
    G, emb = subgroup_closure(gplus, sub_gens, name=f"E{n}xE{m}x{H.name}")
    a = emb.source_index_of(a_plus)
    b = emb.source_index_of(b_plus)
    return gplus, emb, a, b


@dataclass(eq=False)
class AppendixModel:
    """Iterated semidirect model of the compositum Galois group."""

    gamma: FiniteGroup
    gplus_embedding: GroupEmbedding
    g_embedding: GroupEmbedding
    sigma1: int  # index in gamma
    sigma2: int  # index in gamma


def construct_appendix_group(m: int, n: int = 1) -> AppendixModel:
    """((C_{2^m} x C_{2^m}) x| C2) x| C_{2^(m-2)} with the outer generator
    acting by fifth powers on both inner cyclic factors."""
    if m < 2 or not 1 <= n < m:
        raise ValueError("need m >= 2 and 1 <= n < m")
    q = 2**m
    base = direct_product([cyclic(q), cyclic(q)])
    g1, g2 = base.generators
    inner = semidirect_product(base, cyclic(2), [[g2, g1]])
    gamma1, gamma2, pi = inner.generators
    fifth = [
        inner.pow(gamma1, 5),
        inner.pow(gamma2, 5),
        pi,
    ]
    outer = cyclic(2 ** (m - 2))
    gamma = semidirect_product(inner, outer, [fifth])
    gamma.name = f"((C{q}xC{q})x|C2)x|C{2 ** (m - 2)}"
    k = outer.order
    lift = [g * k for g in (gamma1, gamma2, pi)]
    gplus, gplus_emb = subgroup_closure(gamma, lift, name="inner")
    sigma1 = gamma.pow(lift[0], 2 ** (m - n))
    sigma2 = gamma.pow(lift[1], 2 ** (m - n))
    G, g_emb = subgroup_closure(gamma, [sigma1, lift[1]], name="bias-subgroup")
    return AppendixModel(gamma, gplus_emb, g_emb, sigma1, sigma2)
