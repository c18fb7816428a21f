"""Finite groups with 0-based element indices; the identity is always index 0.

Two storage backends sit behind one interface: a dense multiplication table
for orders up to 4096, and a fully enumerated permutation representation on
up to 64 points for orders up to 10**6.  Element indexing is construction-order
deterministic, so everything downstream is reproducible.
"""

from __future__ import annotations

import itertools
import json
import math
import random
import re
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

DENSE_ORDER_CAP = 4096
PERM_ORDER_CAP = 10**6
PERM_DEGREE_CAP = 64
COSET_INDEX_CAP = 10**4
CAYLEY_POINT_CAP = 9


class GroupConstructionError(ValueError):
    """Raised for malformed descriptors, cap violations, or invalid data."""


# ---------------------------------------------------------------------------
# backends


class _DenseBackend:
    __slots__ = ("table", "inv_vec")

    def __init__(self, table: np.ndarray):
        n = table.shape[0]
        self.table = table
        # each row must be a permutation with exactly one hit on the identity
        inv = np.full(n, -1, dtype=np.int64)
        rows, cols = np.nonzero(table == 0)
        if len(rows) != n:
            raise GroupConstructionError("multiplication table has no unique inverses")
        inv[rows] = cols
        if np.any(inv < 0):
            raise GroupConstructionError("some element has no inverse")
        self.inv_vec = inv

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inv_vec[a])


class _PermBackend:
    __slots__ = ("degree", "perms", "_index", "_keys", "_sorted_keys", "_sorted_order")

    def __init__(self, perms: np.ndarray):
        self.degree = perms.shape[1]
        self.perms = np.ascontiguousarray(perms, dtype=np.uint8)
        self._index = {row.tobytes(): i for i, row in enumerate(self.perms)}
        if len(self._index) != len(perms):
            raise GroupConstructionError("duplicate permutations in element list")
        self._keys = None
        self._sorted_keys = None
        self._sorted_order = None

    def index_of(self, perm: np.ndarray) -> int:
        try:
            return self._index[perm.astype(np.uint8).tobytes()]
        except KeyError:
            raise GroupConstructionError("permutation outside the enumerated group") from None

    def mul(self, a: int, b: int) -> int:
        return self._index[self.perms[a][self.perms[b]].tobytes()]

    def inv(self, a: int) -> int:
        return self._index[np.argsort(self.perms[a]).astype(np.uint8).tobytes()]

    def packed_keys(self) -> np.ndarray:
        """uint64 key per element (4 bits per point, degree <= 16 only)."""
        if self._keys is None:
            if self.degree > 16:
                raise GroupConstructionError("packed keys need degree <= 16")
            shifts = (np.uint64(4) * np.arange(self.degree, dtype=np.uint64))
            self._keys = (self.perms.astype(np.uint64) << shifts).sum(
                axis=1, dtype=np.uint64
            )
        return self._keys

    def sorted_keys(self) -> tuple[np.ndarray, np.ndarray]:
        if self._sorted_keys is None:
            keys = self.packed_keys()
            order = np.argsort(keys).astype(np.int64)
            self._sorted_keys = keys[order]
            self._sorted_order = order
        return self._sorted_keys, self._sorted_order

    def lookup_rows(self, rows: np.ndarray) -> np.ndarray:
        """Vectorized element-index lookup for an array of permutations."""
        skeys, order = self.sorted_keys()
        shifts = (np.uint64(4) * np.arange(self.degree, dtype=np.uint64))
        keys = (rows.astype(np.uint64) << shifts).sum(axis=-1, dtype=np.uint64)
        pos = np.searchsorted(skeys, keys)
        if np.any(skeys[pos] != keys):
            raise GroupConstructionError("permutation outside the enumerated group")
        return order[pos]


@dataclass(eq=False)
class ConjugacyPartition:
    """Partition of a group into conjugacy classes."""

    group: "FiniteGroup"
    class_of: np.ndarray
    reps: np.ndarray
    sizes: np.ndarray

    @property
    def n_classes(self) -> int:
        return len(self.reps)

    def order_of_class(self, c: int) -> int:
        return self.group.element_order(int(self.reps[c]))

    def members(self, c: int) -> np.ndarray:
        return np.nonzero(self.class_of == c)[0]


class FiniteGroup:
    """Enumerable finite group; elements are the indices 0..order-1."""

    def __init__(self, backend, order: int, generators: Sequence[int], name: str = "G"):
        self.order = order
        self.generators = [int(g) for g in generators]
        self.name = name
        self._b = backend
        self._orders: np.ndarray | None = None
        self._conjugacy: ConjugacyPartition | None = None
        self._words: list[str] | None = None
        self._dense: np.ndarray | None = None
        self._validate()

    # -- basic queries ------------------------------------------------------

    @property
    def backend(self) -> str:
        return "dense" if isinstance(self._b, _DenseBackend) else "perm"

    def mul(self, a: int, b: int) -> int:
        return self._b.mul(a, b)

    def inv(self, a: int) -> int:
        return self._b.inv(a)

    def conj(self, g: int, x: int) -> int:
        """g * x * g^-1."""
        return self.mul(self.mul(g, x), self.inv(g))

    def pow(self, a: int, k: int) -> int:
        if k < 0:
            return self.pow(self.inv(a), -k)
        result, base = 0, a
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def elements(self) -> range:
        return range(self.order)

    def element_order(self, a: int) -> int:
        return int(self.orders()[a])

    def orders(self) -> np.ndarray:
        if self._orders is None:
            if isinstance(self._b, _PermBackend):
                self._orders = _perm_orders(self._b.perms)
            else:
                out = np.ones(self.order, dtype=np.int64)
                for a in range(1, self.order):
                    x, k = a, 1
                    while x != 0:
                        x = self.mul(x, a)
                        k += 1
                    out[a] = k
                self._orders = out
        return self._orders

    def exponent(self) -> int:
        return int(np.lcm.reduce(self.orders()))

    def is_abelian(self) -> bool:
        gens = self.generators
        return all(
            self.mul(a, b) == self.mul(b, a) for a in gens for b in gens
        )

    def conjugacy(self) -> ConjugacyPartition:
        if self._conjugacy is None:
            self._conjugacy = self._compute_conjugacy()
        return self._conjugacy

    def class_of(self, a: int) -> int:
        return int(self.conjugacy().class_of[a])

    def _compute_conjugacy(self) -> ConjugacyPartition:
        n = self.order
        class_of = np.full(n, -1, dtype=np.int32)
        conjugators = [(g, self.inv(g)) for g in self.generators]
        reps, sizes = [], []
        for i in range(n):
            if class_of[i] >= 0:
                continue
            cid = len(reps)
            class_of[i] = cid
            stack = [i]
            count = 1
            while stack:
                x = stack.pop()
                for g, gi in conjugators:
                    y = self.mul(self.mul(g, x), gi)
                    if class_of[y] < 0:
                        class_of[y] = cid
                        stack.append(y)
                        count += 1
            reps.append(i)
            sizes.append(count)
        return ConjugacyPartition(
            self,
            class_of,
            np.asarray(reps, dtype=np.int64),
            np.asarray(sizes, dtype=np.int64),
        )

    # -- words over declared generators --------------------------------------

    def words(self) -> list[str]:
        if self._words is None:
            parent = np.full(self.order, -1, dtype=np.int64)
            via = np.full(self.order, -1, dtype=np.int64)
            frontier = [0]
            seen = 1
            while frontier and seen < self.order:
                nxt = []
                for x in frontier:
                    for gi, g in enumerate(self.generators):
                        y = self.mul(x, g)
                        if y != 0 and parent[y] < 0 and y != x:
                            parent[y] = x
                            via[y] = gi
                            nxt.append(y)
                            seen += 1
                frontier = nxt
            words = []
            for i in range(self.order):
                if i == 0:
                    words.append("e")
                    continue
                if parent[i] < 0 and i != 0:
                    raise GroupConstructionError(
                        "declared generators do not generate the group"
                    )
                gens_seq: list[int] = []
                x = i
                while x != 0:
                    gens_seq.append(int(via[x]))
                    x = int(parent[x])
                gens_seq.reverse()
                words.append(_format_word(gens_seq))
            self._words = words
        return self._words

    def word(self, a: int) -> str:
        return self.words()[a]

    def element_from_word(self, word: str) -> int:
        word = word.strip()
        if word in ("e", "1", ""):
            return 0
        result = 0
        for token in word.split("*"):
            token = token.strip()
            m = re.fullmatch(r"g(\d+)(?:\^(-?\d+))?", token)
            if not m:
                raise GroupConstructionError(f"bad element word token: {token!r}")
            gi = int(m.group(1))
            if gi >= len(self.generators):
                raise GroupConstructionError(f"unknown generator g{gi}")
            exp = int(m.group(2)) if m.group(2) else 1
            result = self.mul(result, self.pow(self.generators[gi], exp))
        return result

    # -- conversions ----------------------------------------------------------

    def dense_table(self) -> np.ndarray:
        """Full multiplication table (order <= 4096 only)."""
        if self._dense is None:
            if isinstance(self._b, _DenseBackend):
                self._dense = self._b.table
            else:
                if self.order > DENSE_ORDER_CAP:
                    raise GroupConstructionError("group too large for a dense table")
                b = self._b
                table = np.empty((self.order, self.order), dtype=np.int32)
                if b.degree <= 16:
                    for a in range(self.order):
                        rows = b.perms[a][b.perms]
                        table[a] = b.lookup_rows(rows)
                else:
                    for a in range(self.order):
                        for c in range(self.order):
                            table[a, c] = b.mul(a, c)
                self._dense = table
        return self._dense

    def mul_vec(self, a: int, vec: np.ndarray) -> np.ndarray:
        """a * v for every v in vec."""
        if isinstance(self._b, _DenseBackend):
            return self._b.table[a, vec].astype(np.int64)
        b = self._b
        if b.degree <= 16:
            return b.lookup_rows(b.perms[a][b.perms[vec]])
        return np.asarray([b.mul(a, int(v)) for v in vec], dtype=np.int64)

    def perm_of(self, a: int) -> np.ndarray:
        if not isinstance(self._b, _PermBackend):
            raise GroupConstructionError("not a permutation-backed group")
        return self._b.perms[a]

    # -- validation -----------------------------------------------------------

    def _validate(self) -> None:
        if self.order <= 0:
            raise GroupConstructionError("empty group")
        if isinstance(self._b, _DenseBackend):
            t = self._b.table
            n = self.order
            if t.shape != (n, n):
                raise GroupConstructionError("table shape mismatch")
            idx = np.arange(n)
            if not (np.array_equal(t[0], idx) and np.array_equal(t[:, 0], idx)):
                raise GroupConstructionError("index 0 is not a two-sided identity")
            if not np.array_equal(np.sort(t, axis=1), np.tile(idx, (n, 1))):
                raise GroupConstructionError("rows are not permutations")
            rng = random.Random(0xA55)
            m = min(n * n * n, 10_000)
            for _ in range(m):
                a, b, c = rng.randrange(n), rng.randrange(n), rng.randrange(n)
                if t[t[a, b], c] != t[a, t[b, c]]:
                    raise GroupConstructionError("multiplication is not associative")
        else:
            ident = np.arange(self._b.degree, dtype=np.uint8)
            if not np.array_equal(self._b.perms[0], ident):
                raise GroupConstructionError("index 0 is not the identity permutation")
        for g in self.generators:
            if not 0 <= g < self.order:
                raise GroupConstructionError("generator index out of range")

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order}, backend={self.backend})"


def _perm_orders(perms: np.ndarray) -> np.ndarray:
    n, d = perms.shape
    out = np.empty(n, dtype=np.int64)
    for i in range(n):
        p = perms[i]
        seen = np.zeros(d, dtype=bool)
        o = 1
        for s in range(d):
            if seen[s]:
                continue
            length = 0
            x = s
            while not seen[x]:
                seen[x] = True
                x = p[x]
                length += 1
            o = o * length // math.gcd(o, length)
        out[i] = o
    return out


def _format_word(gen_seq: list[int]) -> str:
    parts = []
    i = 0
    while i < len(gen_seq):
        j = i
        while j < len(gen_seq) and gen_seq[j] == gen_seq[i]:
            j += 1
        count = j - i
        parts.append(f"g{gen_seq[i]}" if count == 1 else f"g{gen_seq[i]}^{count}")
        i = j
    return "*".join(parts)


# ---------------------------------------------------------------------------
# embeddings, subgroups, cosets


@dataclass(eq=False)
class GroupEmbedding:
    """Injective homomorphism source -> target, stored as an index map."""

    source: FiniteGroup
    target: FiniteGroup
    img: np.ndarray
    trusted: bool = False
    _image_sorted: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.img = np.asarray(self.img, dtype=np.int64)
        if len(self.img) != self.source.order:
            raise GroupConstructionError("embedding map has wrong length")
        if len(np.unique(self.img)) != len(self.img):
            raise GroupConstructionError("embedding is not injective")
        if self.img[0] != 0:
            raise GroupConstructionError("embedding must send identity to identity")
        if not self.trusted:
            self._check_homomorphism()

    def _check_homomorphism(self) -> None:
        G, H, img = self.source, self.target, self.img
        n = G.order
        if n <= DENSE_ORDER_CAP:
            table = G.dense_table()
            expect = img[table]
            if H.backend == "dense":
                got = H.dense_table()[np.ix_(img, img)]
                ok = np.array_equal(got, expect)
            else:
                b = H._b
                ok = True
                if b.degree <= 16:
                    chunk = max(1, (1 << 22) // max(n, 1))
                    for lo in range(0, n, chunk):
                        rows = img[lo : lo + chunk]
                        prod = b.perms[rows][:, b.perms[img]]
                        got = b.lookup_rows(prod)
                        if not np.array_equal(got, expect[lo : lo + chunk]):
                            ok = False
                            break
                else:
                    for a in range(n):
                        for c in range(n):
                            if H.mul(int(img[a]), int(img[c])) != expect[a, c]:
                                ok = False
                                break
                        if not ok:
                            break
            if not ok:
                raise GroupConstructionError("map is not a homomorphism")
        else:
            rng = random.Random(0xE31)
            pairs = [(a, b) for a in G.generators for b in G.generators]
            pairs += [
                (rng.randrange(n), rng.randrange(n)) for _ in range(10_000)
            ]
            for a, b in pairs:
                if H.mul(int(img[a]), int(img[b])) != img[G.mul(a, b)]:
                    raise GroupConstructionError("map is not a homomorphism")

    def image_elements(self) -> np.ndarray:
        if self._image_sorted is None:
            self._image_sorted = np.sort(self.img)
        return self._image_sorted

    def index(self) -> int:
        return self.target.order // self.source.order

    def source_index_of(self, target_elem: int) -> int:
        """Source index of a target element lying in the image."""
        pos = int(np.nonzero(self.img == target_elem)[0][0])
        return pos


@dataclass(eq=False)
class CosetSpace:
    """Left cosets x*imageG in the target group, with the target action."""

    embedding: GroupEmbedding
    reps: np.ndarray
    coset_of: np.ndarray

    @property
    def n_cosets(self) -> int:
        return len(self.reps)

    def act(self, g: int, c: int) -> int:
        t = self.embedding.target
        return int(self.coset_of[t.mul(g, int(self.reps[c]))])

    def act_vec(self, g: int) -> np.ndarray:
        """The permutation of cosets induced by g, as an index array."""
        t = self.embedding.target
        return self.coset_of[t.mul_vec(g, self.reps)]


def closure(G: FiniteGroup, gens: Iterable[int]) -> tuple[int, ...]:
    """Sorted element indices of the subgroup generated by gens."""
    gens = [int(g) for g in gens]
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.mul(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return tuple(sorted(seen))


def subgroup_closure(
    G: FiniteGroup, gens: Sequence[int], name: str | None = None
) -> tuple[FiniteGroup, GroupEmbedding]:
    """Smallest subgroup containing gens, with its inclusion embedding."""
    elems = closure(G, gens)
    return _materialize_subgroup(G, elems, [int(g) for g in gens], name)


def _materialize_subgroup(
    G: FiniteGroup,
    elems: Sequence[int],
    gens: Sequence[int],
    name: str | None = None,
) -> tuple[FiniteGroup, GroupEmbedding]:
    elems = np.asarray(sorted(elems), dtype=np.int64)
    pos = {int(e): i for i, e in enumerate(elems)}
    if not gens and len(elems) > 1:
        raise GroupConstructionError("subgroup materialization needs generators")
    sub_gens = [pos[int(g)] for g in gens] or [0]
    name = name or f"{G.name}|sub{len(elems)}"
    if G.backend == "perm":
        H = FiniteGroup(
            _PermBackend(G._b.perms[elems]), len(elems), sub_gens, name
        )
    else:
        t = G.dense_table()[np.ix_(elems, elems)]
        table = np.searchsorted(elems, t).astype(np.int32)
        H = FiniteGroup(_DenseBackend(table), len(elems), sub_gens, name)
    emb = GroupEmbedding(H, G, elems, trusted=True)
    return H, emb


def is_normal(G: FiniteGroup, elems: Iterable[int]) -> bool:
    elem_set = frozenset(int(e) for e in elems)
    return all(
        G.conj(g, x) in elem_set for g in G.generators for x in elem_set
    )


def normalizer(G: FiniteGroup, elems: Iterable[int]) -> tuple[int, ...]:
    elem_set = frozenset(int(e) for e in elems)
    out = [
        g
        for g in G.elements()
        if all(G.conj(g, x) in elem_set for x in elem_set)
    ]
    return tuple(out)


def centralizer(G: FiniteGroup, a: int) -> tuple[int, ...]:
    return tuple(g for g in G.elements() if G.mul(g, a) == G.mul(a, g))


def center(G: FiniteGroup) -> tuple[int, ...]:
    gens = G.generators
    return tuple(
        g
        for g in G.elements()
        if all(G.mul(g, h) == G.mul(h, g) for h in gens)
    )


def sylow_subgroup(G: FiniteGroup, p: int) -> tuple[FiniteGroup, GroupEmbedding]:
    """A p-Sylow subgroup, grown by closure over p-power-order elements."""
    if p < 2 or any(p % q == 0 for q in range(2, int(math.isqrt(p)) + 1)):
        raise GroupConstructionError(f"{p} is not prime")
    n = G.order
    target = 1
    while n % p == 0:
        target *= p
        n //= p
    orders = G.orders()
    p_elems = [i for i in G.elements() if _is_p_power(int(orders[i]), p)]
    current: tuple[int, ...] = (0,)
    gens: list[int] = []
    while len(current) < target:
        grown = False
        norm = set(normalizer(G, current)) if len(current) > 1 else None
        for x in p_elems:
            if x in current:
                continue
            if norm is not None and x not in norm:
                continue
            cand = closure(G, gens + [x])
            if len(cand) % p == 0 and _is_p_power(len(cand), p) and len(cand) <= target:
                current = cand
                gens.append(x)
                grown = True
                break
        if not grown:
            raise GroupConstructionError("sylow search failed to grow")
    return _materialize_subgroup(G, current, gens or [0], f"{G.name}|syl{p}")


def _is_p_power(n: int, p: int) -> bool:
    while n % p == 0:
        n //= p
    return n == 1


def cayley_embedding(G: FiniteGroup) -> tuple[FiniteGroup, GroupEmbedding]:
    """Embed G into the symmetric group on its own elements by left translation."""
    if G.order > CAYLEY_POINT_CAP:
        raise GroupConstructionError(
            f"cayley embedding materializes S_n only for n <= {CAYLEY_POINT_CAP}"
        )
    S = catalog(f"S{max(G.order, 1)}")
    table = G.dense_table()
    img = S._b.lookup_rows(table.astype(np.uint8)) if G.order > 1 else np.zeros(1, np.int64)
    emb = GroupEmbedding(G, S, img, trusted=True)
    return S, emb


def coset_space(embedding: GroupEmbedding) -> CosetSpace:
    Gp = embedding.target
    index = Gp.order // embedding.source.order
    if index > COSET_INDEX_CAP:
        raise GroupConstructionError(f"coset index {index} exceeds cap {COSET_INDEX_CAP}")
    image = embedding.img
    coset_of = np.full(Gp.order, -1, dtype=np.int32)
    reps = []
    for x in Gp.elements():
        if coset_of[x] >= 0:
            continue
        c = len(reps)
        reps.append(x)
        coset_of[Gp.mul_vec(x, image)] = c
    if len(reps) * embedding.source.order != Gp.order:
        raise GroupConstructionError("cosets do not partition the group")
    return CosetSpace(embedding, np.asarray(reps, dtype=np.int64), coset_of)


def abelian_invariants(G: FiniteGroup) -> list[int]:
    """Invariant factors d1 | d2 | ... of an abelian group.

    Repeatedly splits off a cyclic direct factor of maximal order: a basis of
    the quotient by that factor is computed recursively and lifted back.
    """
    if not G.is_abelian():
        raise GroupConstructionError("abelian_invariants needs an abelian group")
    basis = _abelian_basis(G)
    return sorted(order for _, order in basis)


def _abelian_basis(H: FiniteGroup) -> list[tuple[int, int]]:
    """(element, order) pairs whose cyclic spans decompose H as a direct sum."""
    if H.order == 1:
        return []
    orders = H.orders()
    exp = int(orders.max())
    g = int(np.nonzero(orders == exp)[0][0])
    if exp == H.order:
        return [(g, exp)]
    Q, reps, coset_of = _quotient_with_reps(H, [g])
    cyc = _cyclic_span(H, g)
    log_g = {e: k for k, e in enumerate(cyc)}
    lifts: list[tuple[int, int]] = []
    for q_elem, m in _abelian_basis(Q):
        y = int(reps[q_elem])
        t = log_g[H.pow(y, m)]
        if t % m:
            raise GroupConstructionError("cyclic factor lift failed")
        y = H.mul(y, H.pow(g, (-(t // m)) % exp))
        lifts.append((y, m))
    return lifts + [(g, exp)]


def _cyclic_span(G: FiniteGroup, g: int) -> list[int]:
    out = [0]
    x = g
    while x != 0:
        out.append(x)
        x = G.mul(x, g)
    return out


def commutator(G: FiniteGroup, a: int, b: int) -> int:
    return G.mul(G.mul(a, b), G.mul(G.inv(a), G.inv(b)))


def is_nilpotent(G: FiniteGroup) -> bool:
    """Lower central series by commutator closure terminates at the identity."""
    current: Sequence[int] = tuple(G.elements())
    while True:
        comms = {commutator(G, a, g) for a in current for g in G.elements()}
        nxt = closure(G, comms)
        if len(nxt) == 1:
            return True
        if len(nxt) == len(current):
            return False
        current = nxt


# ---------------------------------------------------------------------------
# constructors


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupConstructionError("cyclic order must be positive")
    if n > DENSE_ORDER_CAP:
        raise GroupConstructionError(f"cyclic({n}) exceeds the dense cap {DENSE_ORDER_CAP}")
    idx = np.arange(n)
    table = ((idx[:, None] + idx[None, :]) % n).astype(np.int32)
    gens = [1] if n > 1 else [0]
    return FiniteGroup(_DenseBackend(table), n, gens, f"C{n}")


def abelian(factors: Sequence[int]) -> FiniteGroup:
    if not factors:
        return cyclic(1)
    g = cyclic(int(factors[0]))
    for d in factors[1:]:
        g = direct_product([g, cyclic(int(d))])
    g.name = "x".join(f"C{int(d)}" for d in factors)
    return g


def direct_product(groups: Sequence[FiniteGroup]) -> FiniteGroup:
    if not groups:
        return cyclic(1)
    if len(groups) == 1:
        return groups[0]
    g = groups[0]
    for h in groups[1:]:
        g = _product2(g, h)
    return g


def _product2(G1: FiniteGroup, G2: FiniteGroup) -> FiniteGroup:
    n1, n2 = G1.order, G2.order
    n = n1 * n2
    name = f"{G1.name}x{G2.name}"
    if n <= DENSE_ORDER_CAP:
        t1 = G1.dense_table().astype(np.int64)
        t2 = G2.dense_table().astype(np.int64)
        table = (t1[:, None, :, None] * n2 + t2[None, :, None, :]).reshape(n, n)
        gens = [g * n2 for g in G1.generators] + list(G2.generators)
        return FiniteGroup(_DenseBackend(table.astype(np.int32)), n, gens, name)
    if G1.backend == "perm" and G2.backend == "perm":
        d1, d2 = G1._b.degree, G2._b.degree
        if d1 + d2 > PERM_DEGREE_CAP or n > PERM_ORDER_CAP:
            raise GroupConstructionError("direct product exceeds permutation caps")
        perms = np.empty((n, d1 + d2), dtype=np.uint8)
        p1 = np.repeat(G1._b.perms, n2, axis=0)
        p2 = np.tile(G2._b.perms, (n1, 1))
        perms[:, :d1] = p1
        perms[:, d1:] = p2 + d1
        gens = [g * n2 for g in G1.generators] + list(G2.generators)
        return FiniteGroup(_PermBackend(perms), n, gens, name)
    raise GroupConstructionError(
        "direct product above the dense cap needs permutation factors"
    )


def semidirect_product(
    N: FiniteGroup, H: FiniteGroup, action: Sequence[Sequence[int]]
) -> FiniteGroup:
    """N x| H where action[i] lists the images of N's generators under H's i-th generator."""
    n_n, n_h = N.order, H.order
    if n_n * n_h > DENSE_ORDER_CAP:
        raise GroupConstructionError("semidirect product exceeds the dense cap")
    if len(action) != len(H.generators):
        raise GroupConstructionError("need one automorphism per acting generator")
    gen_autos = [_extend_automorphism(N, images) for images in action]
    # extend h -> phi_h over all of H by BFS, checking consistency
    phi = np.full((n_h, n_n), -1, dtype=np.int32)
    phi[0] = np.arange(n_n)
    frontier = [0]
    while frontier:
        nxt = []
        for h in frontier:
            for gi, g in enumerate(H.generators):
                hg = H.mul(h, g)
                composed = gen_autos[gi][phi[h]]
                if phi[hg][0] < 0:
                    phi[hg] = composed
                    nxt.append(hg)
                elif not np.array_equal(phi[hg], composed):
                    raise GroupConstructionError(
                        "action does not respect the acting group's relations"
                    )
        frontier = nxt
    for h in range(n_h):
        for gi, g in enumerate(H.generators):
            hg = H.mul(h, g)
            if not np.array_equal(phi[hg], gen_autos[gi][phi[h]]):
                raise GroupConstructionError(
                    "action does not respect the acting group's relations"
                )
    tn = N.dense_table().astype(np.int64)
    th = H.dense_table().astype(np.int64)
    n = n_n * n_h
    table = np.empty((n, n), dtype=np.int32)
    x1 = np.repeat(np.arange(n_n), n_h)
    h1 = np.tile(np.arange(n_h), n_n)
    for e2 in range(n):
        x2, h2 = divmod(e2, n_h)
        table[:, e2] = tn[x1, phi[h1, x2]] * n_h + th[h1, h2]
    gens = [x * n_h for x in N.generators] + list(H.generators)
    return FiniteGroup(
        _DenseBackend(table), n, gens, f"({N.name})x|({H.name})"
    )


def _extend_automorphism(N: FiniteGroup, gen_images: Sequence[int]) -> np.ndarray:
    """Permutation of N extending generator images; errors if not an automorphism."""
    if len(gen_images) != len(N.generators):
        raise GroupConstructionError("one image per generator of the normal part")
    out = np.full(N.order, -1, dtype=np.int64)
    out[0] = 0
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g, img in zip(N.generators, gen_images):
                y = N.mul(x, g)
                fy = N.mul(int(out[x]), int(img))
                if out[y] < 0:
                    out[y] = fy
                    nxt.append(y)
                elif out[y] != fy:
                    raise GroupConstructionError("action images are not a homomorphism")
        frontier = nxt
    if np.any(out < 0) or len(np.unique(out)) != N.order:
        raise GroupConstructionError("action images are not an automorphism")
    # full multiplicativity check
    t = N.dense_table()
    if not np.array_equal(out[t], t[np.ix_(out, out)]):
        raise GroupConstructionError("action images are not a homomorphism")
    return out


def perm_group(degree: int, generators: Sequence[Sequence[int]], name: str = "perm") -> FiniteGroup:
    """Closure of the given 0-based permutations, enumerated breadth-first."""
    if degree > PERM_DEGREE_CAP:
        raise GroupConstructionError(f"degree {degree} exceeds cap {PERM_DEGREE_CAP}")
    gen_rows = []
    for g in generators:
        row = np.asarray(g, dtype=np.int64)
        if row.shape != (degree,) or sorted(row.tolist()) != list(range(degree)):
            raise GroupConstructionError(f"not a permutation of 0..{degree - 1}: {g}")
        gen_rows.append(row.astype(np.uint8))
    ident = np.arange(degree, dtype=np.uint8)
    index = {ident.tobytes(): 0}
    rows = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gen_rows:
                q = p[g]
                key = q.tobytes()
                if key not in index:
                    index[key] = len(rows)
                    rows.append(q)
                    nxt.append(q)
                    if len(rows) > PERM_ORDER_CAP:
                        raise GroupConstructionError("enumeration exceeded the order cap")
        frontier = nxt
    perms = np.stack(rows)
    backend = _PermBackend(perms)
    gens = [backend.index_of(g) for g in gen_rows]
    return FiniteGroup(backend, len(rows), gens, name)


def quotient_group(G: FiniteGroup, kernel_gens: Sequence[int]) -> FiniteGroup:
    return _quotient_with_reps(G, kernel_gens)[0]


def _quotient_with_reps(
    G: FiniteGroup, kernel_gens: Sequence[int]
) -> tuple[FiniteGroup, np.ndarray, np.ndarray]:
    kernel = closure(G, kernel_gens)
    if not is_normal(G, kernel):
        raise GroupConstructionError("quotient kernel is not normal")
    k = np.asarray(kernel, dtype=np.int64)
    n_q = G.order // len(kernel)
    if n_q > DENSE_ORDER_CAP:
        raise GroupConstructionError("quotient exceeds the dense cap")
    coset_of = np.full(G.order, -1, dtype=np.int64)
    reps = []
    for x in G.elements():
        if coset_of[x] >= 0:
            continue
        coset_of[G.mul_vec(x, k)] = len(reps)
        reps.append(x)
    reps_arr = np.asarray(reps, dtype=np.int64)
    table = np.empty((n_q, n_q), dtype=np.int32)
    for c1 in range(n_q):
        table[c1] = coset_of[G.mul_vec(int(reps_arr[c1]), reps_arr)]
    gens = []
    for g in G.generators:
        cg = int(coset_of[g])
        if cg != 0 and cg not in gens:
            gens.append(cg)
    Q = FiniteGroup(_DenseBackend(table), n_q, gens or [0], f"{G.name}/K{len(kernel)}")
    return Q, reps_arr, coset_of


# ---------------------------------------------------------------------------
# catalog


def _dihedral(n: int) -> FiniteGroup:
    """Dihedral group of order 2n: elements (i, eps), sigma = g0, tau = g1."""
    i = np.arange(n)
    e = np.arange(2)
    x1 = np.repeat(i, 2)[:, None]
    e1 = np.tile(e, n)[:, None]
    x2 = np.repeat(i, 2)[None, :]
    e2 = np.tile(e, n)[None, :]
    sign = 1 - 2 * e1
    table = (((x1 + sign * x2) % n) * 2 + (e1 ^ e2)).astype(np.int32)
    gens = [2, 1] if n > 1 else [1]
    return FiniteGroup(_DenseBackend(table), 2 * n, gens, f"D{2 * n}")


def _generalized_quaternion(order: int) -> FiniteGroup:
    """Generalized quaternion group of order 2^k >= 8; elements (i, eps)."""
    if order < 8 or order & (order - 1):
        raise GroupConstructionError("generalized quaternion order must be 2^k >= 8")
    m = order // 2
    h = m // 2
    i = np.arange(m)
    x1 = np.repeat(i, 2)[:, None]
    e1 = np.tile(np.arange(2), m)[:, None]
    x2 = np.repeat(i, 2)[None, :]
    e2 = np.tile(np.arange(2), m)[None, :]
    sign = 1 - 2 * e1
    twist = (e1 & e2) * h
    table = (((x1 + sign * x2 + twist) % m) * 2 + (e1 ^ e2)).astype(np.int32)
    return FiniteGroup(_DenseBackend(table), order, [2, 1], f"Q{order}")


def _symmetric(n: int) -> FiniteGroup:
    if n > CAYLEY_POINT_CAP:
        raise GroupConstructionError(f"S{n} is above the catalog cap")
    if n <= 1:
        return perm_group(max(n, 1), [list(range(max(n, 1)))], name=f"S{n}")
    perms = np.array(list(itertools.permutations(range(n))), dtype=np.uint8)
    backend = _PermBackend(perms)
    transposition = np.arange(n, dtype=np.uint8)
    transposition[[0, 1]] = [1, 0]
    cycle = np.roll(np.arange(n, dtype=np.uint8), -1)
    gens = [backend.index_of(transposition), backend.index_of(cycle)]
    return FiniteGroup(backend, len(perms), gens, f"S{n}")


def _alternating(n: int) -> FiniteGroup:
    if n > CAYLEY_POINT_CAP:
        raise GroupConstructionError(f"A{n} is above the catalog cap")
    if n <= 2:
        return perm_group(max(n, 1), [list(range(max(n, 1)))], name=f"A{n}")
    gens = []
    for i in range(n - 2):
        c = list(range(n))
        c[i], c[i + 1], c[i + 2] = c[i + 1], c[i + 2], c[i]
        gens.append(c)
    g = perm_group(n, gens, name=f"A{n}")
    assert g.order == math.factorial(n) // 2
    return g


def _unitriangular(n: int, q: int) -> FiniteGroup:
    """Upper unitriangular n x n matrices over Z/q (q a power of 2 here)."""
    positions = [(i, j) for i in range(n) for j in range(i + 1, n)]
    k = len(positions)
    order = q**k
    if order > DENSE_ORDER_CAP:
        raise GroupConstructionError(
            f"U({n},Z/{q}) has order {order}, above the dense cap {DENSE_ORDER_CAP}"
        )
    mats = np.zeros((order, n, n), dtype=np.int64)
    mats[:, range(n), range(n)] = 1
    idx = np.arange(order)
    for t, (i, j) in enumerate(positions):
        mats[:, i, j] = (idx // q**t) % q
    prod_index = np.empty((order, order), dtype=np.int32)
    weights = np.array([q**t for t in range(k)], dtype=np.int64)
    chunk = max(1, (1 << 22) // (order * n * n))
    for lo in range(0, order, chunk):
        block = mats[lo : lo + chunk]
        prod = np.einsum("aij,bjk->abik", block, mats) % q
        enc = np.zeros(prod.shape[:2], dtype=np.int64)
        for t, (i, j) in enumerate(positions):
            enc += prod[:, :, i, j] * weights[t]
        prod_index[lo : lo + chunk] = enc
    gens = [int(q ** positions.index((i, i + 1))) for i in range(n - 1)]
    return FiniteGroup(
        _DenseBackend(prod_index), order, gens, f"U({n},Z/{q})"
    )


def _affine2(q: int) -> FiniteGroup:
    """(Z/q)^2 x| GL2(Z/q) acting on q^2 points (q = p^m <= 8)."""
    if q * q > PERM_DEGREE_CAP:
        raise GroupConstructionError("affine catalog entry needs q^2 <= 64")
    pts = [(x, y) for x in range(q) for y in range(q)]
    enc = {pt: i for i, pt in enumerate(pts)}

    def lin(a, b, c, d):
        return [enc[((a * x + b * y) % q, (c * x + d * y) % q)] for x, y in pts]

    def shift(dx, dy):
        return [enc[((x + dx) % q, (y + dy) % q)] for x, y in pts]

    units = [u for u in range(2, q) if math.gcd(u, q) == 1]
    gens = [shift(1, 0), shift(0, 1), lin(1, 1, 0, 1), lin(1, 0, 1, 1)]
    gens += [lin(u, 0, 0, 1) for u in ([q - 1] + units[:1] if q > 2 else [])]
    return perm_group(q * q, gens, name=f"aff2({q})")


_CATALOG_RE_D = re.compile(r"D(\d+)$")
_CATALOG_RE_Q = re.compile(r"Q(\d+)$")
_CATALOG_RE_S = re.compile(r"S(\d)$")
_CATALOG_RE_A = re.compile(r"A(\d)$")
_CATALOG_RE_U = re.compile(r"U\((\d),(\d+)\)$")
_CATALOG_RE_AFF = re.compile(r"aff2\((\d+)\)$")


@lru_cache(maxsize=None)
def catalog(name: str) -> FiniteGroup:
    """Built-in named groups: Q8..Q64, D6.., U(n,Z/2^m), S2..S9, A3..A9, aff2(q)."""
    name = name.strip()
    if m := _CATALOG_RE_Q.match(name):
        return _generalized_quaternion(int(m.group(1)))
    if m := _CATALOG_RE_D.match(name):
        order = int(m.group(1))
        if order % 2 or order < 4:
            raise GroupConstructionError("dihedral catalog names are D<2n>")
        return _dihedral(order // 2)
    if m := _CATALOG_RE_S.match(name):
        return _symmetric(int(m.group(1)))
    if m := _CATALOG_RE_A.match(name):
        return _alternating(int(m.group(1)))
    if m := _CATALOG_RE_U.match(name):
        n, q = int(m.group(1)), int(m.group(2))
        if not 2 <= n <= 4 or q & (q - 1) or not 2 <= q <= 16:
            raise GroupConstructionError("unitriangular catalog entries are U(n,q), n<=4, q=2^m<=16")
        return _unitriangular(n, q)
    if m := _CATALOG_RE_AFF.match(name):
        return _affine2(int(m.group(1)))
    raise GroupConstructionError(f"unknown catalog group {name!r}")


# ---------------------------------------------------------------------------
# descriptors


def build_group(spec) -> FiniteGroup:
    """Build a group from a JSON descriptor (dict), JSON text, or shorthand string."""
    if isinstance(spec, str):
        spec = spec.strip()
        if spec.startswith("{"):
            spec = json.loads(spec)
        else:
            spec = _shorthand(spec)
    if not isinstance(spec, dict):
        raise GroupConstructionError(f"bad group descriptor: {spec!r}")
    known = {
        "cyclic": {"kind", "n"},
        "abelian": {"kind", "factors"},
        "direct_product": {"kind", "factors"},
        "semidirect": {"kind", "normal", "acting", "action"},
        "perm": {"kind", "degree", "generators"},
        "quotient": {"kind", "group", "kernel_gens"},
        "catalog": {"kind", "name"},
    }
    kind = spec.get("kind")
    if kind not in known:
        raise GroupConstructionError(f"unknown descriptor kind {kind!r}")
    extra = set(spec) - known[kind]
    if extra:
        raise GroupConstructionError(f"unknown descriptor fields {sorted(extra)}")
    if kind == "cyclic":
        return cyclic(int(spec["n"]))
    if kind == "abelian":
        return abelian([int(d) for d in spec["factors"]])
    if kind == "direct_product":
        return direct_product([build_group(s) for s in spec["factors"]])
    if kind == "semidirect":
        N = build_group(spec["normal"])
        H = build_group(spec["acting"])
        action = [
            [N.element_from_word(v) if isinstance(v, str) else int(v) for v in images]
            for images in spec["action"]
        ]
        return semidirect_product(N, H, action)
    if kind == "perm":
        return perm_group(int(spec["degree"]), spec["generators"])
    if kind == "quotient":
        G = build_group(spec["group"])
        gens = [
            G.element_from_word(v) if isinstance(v, str) else int(v)
            for v in spec["kernel_gens"]
        ]
        return quotient_group(G, gens)
    return catalog(str(spec["name"]))


def _shorthand(text: str) -> dict:
    if ":" not in text:
        return {"kind": "catalog", "name": text}
    kind, _, arg = text.partition(":")
    kind = kind.strip()
    if kind == "catalog":
        return {"kind": "catalog", "name": arg.strip()}
    if kind == "cyclic":
        return {"kind": "cyclic", "n": int(arg)}
    if kind == "abelian":
        return {"kind": "abelian", "factors": [int(x) for x in arg.split(",")]}
    raise GroupConstructionError(f"unknown shorthand descriptor {text!r}")


def modular_semidirect(p: int, m: int, n: int) -> FiniteGroup:
    """Z/p^m x| Z/p^n with the acting generator multiplying by 1 + p^(m-n)."""
    if not 1 <= n < m:
        raise GroupConstructionError("need 1 <= n < m")
    pm, pn = p**m, p**n
    u = 1 + p ** (m - n)
    ok, v = 1, u % pm
    while v != 1:
        v = (v * u) % pm
        ok += 1
    if ok != pn:
        raise GroupConstructionError(
            f"multiplier 1+p^(m-n) has order {ok}, not p^n={pn}"
        )
    N, H = cyclic(pm), cyclic(pn)
    g = semidirect_product(N, H, [[u % pm]])
    g.name = f"C{pm}x|C{pn}"
    return g
