"""Exact-rational class functions: indicators, root counts, induction.

Values are stored per conjugacy class as `Fraction`s; all arithmetic is exact.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .groups import FiniteGroup, GroupEmbedding

INDUCE_FULL_LOOP_CAP = 10**5


@dataclass(frozen=True, eq=False)
class ClassFunction:
    """Conjugation-invariant function on a finite group, one value per class."""

    group: FiniteGroup
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.values) != self.group.conjugacy().n_classes:
            raise ValueError("one value per conjugacy class required")

    def value_on_class(self, c: int) -> Fraction:
        return self.values[c]

    def __call__(self, elem: int) -> Fraction:
        return self.values[self.group.class_of(elem)]

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ClassFunction)
            and self.group is other.group
            and self.values == other.values
        )

    def __add__(self, other: "ClassFunction") -> "ClassFunction":
        _same_group(self, other)
        return ClassFunction(
            self.group, tuple(a + b for a, b in zip(self.values, other.values))
        )

    def __sub__(self, other: "ClassFunction") -> "ClassFunction":
        _same_group(self, other)
        return ClassFunction(
            self.group, tuple(a - b for a, b in zip(self.values, other.values))
        )

    def __neg__(self) -> "ClassFunction":
        return ClassFunction(self.group, tuple(-a for a in self.values))

    def scale(self, c) -> "ClassFunction":
        c = Fraction(c)
        return ClassFunction(self.group, tuple(c * a for a in self.values))

    def scaled_ints(self) -> tuple[np.ndarray, int]:
        """(numerators, denominator) with denominator * values all integral."""
        denom = 1
        for v in self.values:
            denom = denom * v.denominator // gcd(denom, v.denominator)
        nums = np.asarray([int(v * denom) for v in self.values], dtype=np.int64)
        return nums, denom

    def to_json(self) -> dict:
        reps = self.group.conjugacy().reps
        return {
            "class_reps": [self.group.word(int(r)) for r in reps],
            "values": [str(v) for v in self.values],
        }

    @staticmethod
    def from_json(group: FiniteGroup, data: dict) -> "ClassFunction":
        part = group.conjugacy()
        values = [Fraction(0)] * part.n_classes
        for word, val in zip(data["class_reps"], data["values"]):
            c = group.class_of(group.element_from_word(word))
            values[c] = Fraction(val)
        return ClassFunction(group, tuple(values))


def _same_group(f: ClassFunction, g: ClassFunction) -> None:
    if f.group is not g.group:
        raise ValueError("class functions live on different groups")


def from_class_values(G: FiniteGroup, values: Sequence) -> ClassFunction:
    return ClassFunction(G, tuple(Fraction(v) for v in values))


def from_element_values(G: FiniteGroup, elem_values: Sequence) -> ClassFunction:
    """Build from per-element values, checking constancy on classes."""
    part = G.conjugacy()
    out = [None] * part.n_classes
    for e, v in enumerate(elem_values):
        c = int(part.class_of[e])
        v = Fraction(v)
        if out[c] is None:
            out[c] = v
        elif out[c] != v:
            raise ValueError("values are not constant on conjugacy classes")
    return ClassFunction(G, tuple(out))


def zero(G: FiniteGroup) -> ClassFunction:
    return ClassFunction(G, (Fraction(0),) * G.conjugacy().n_classes)


def one(G: FiniteGroup) -> ClassFunction:
    return ClassFunction(G, (Fraction(1),) * G.conjugacy().n_classes)


def indicator(G: FiniteGroup, c: int) -> ClassFunction:
    values = [Fraction(0)] * G.conjugacy().n_classes
    values[c] = Fraction(1)
    return ClassFunction(G, tuple(values))


def difference_indicator(G: FiniteGroup, c1: int, c2: int) -> ClassFunction:
    """(|G|/|C1|) 1_{C1} - (|G|/|C2|) 1_{C2}; averages to zero over the group."""
    if c1 == c2:
        raise ValueError("the two classes must differ")
    part = G.conjugacy()
    values = [Fraction(0)] * part.n_classes
    values[c1] = Fraction(G.order, int(part.sizes[c1]))
    values[c2] = -Fraction(G.order, int(part.sizes[c2]))
    return ClassFunction(G, tuple(values))


def scaled_indicator(G: FiniteGroup, c: int) -> ClassFunction:
    """(|G|/|C|) 1_C; has inner product 1 with the constant function."""
    part = G.conjugacy()
    values = [Fraction(0)] * part.n_classes
    values[c] = Fraction(G.order, int(part.sizes[c]))
    return ClassFunction(G, tuple(values))


def power_pullback(t: ClassFunction, ell: int) -> ClassFunction:
    """t composed with the power map x -> x^ell."""
    if ell < 0:
        raise ValueError("power must be nonnegative")
    G = t.group
    ell %= G.exponent()
    part = G.conjugacy()
    values = tuple(
        t.values[G.class_of(G.pow(int(rep), ell))] for rep in part.reps
    )
    return ClassFunction(G, values)


def power_class_table(G: FiniteGroup, max_power: int) -> np.ndarray:
    """table[c, j] = class of x^j for x in class c, 0 <= j <= max_power."""
    part = G.conjugacy()
    exp = G.exponent()
    out = np.empty((part.n_classes, max_power + 1), dtype=np.int32)
    for c, rep in enumerate(part.reps):
        for j in range(max_power + 1):
            out[c, j] = G.class_of(G.pow(int(rep), j % exp))
    return out


def root_count(G: FiniteGroup, ell: int) -> ClassFunction:
    """r_ell(x) = number of y with y^ell = x, as a class function."""
    if ell < 1:
        raise ValueError("root index must be >= 1")
    exp = G.exponent()
    ell_red = ell % exp or exp
    counts = np.zeros(G.order, dtype=np.int64)
    for y in G.elements():
        counts[G.pow(y, ell_red)] += 1
    return from_element_values(G, counts.tolist())


def root_count_by_order(G: FiniteGroup, ell: int, s: int) -> ClassFunction:
    """Roots restricted to those of element order exactly s."""
    if ell < 1 or s < 1:
        raise ValueError("root index and order must be >= 1")
    exp = G.exponent()
    ell_red = ell % exp or exp
    orders = G.orders()
    counts = np.zeros(G.order, dtype=np.int64)
    for y in G.elements():
        if orders[y] == s:
            counts[G.pow(y, ell_red)] += 1
    return from_element_values(G, counts.tolist())


def inner_product(f: ClassFunction, g: ClassFunction) -> Fraction:
    """(1/|G|) sum over x of f(x) g(x); rational values, so no conjugation."""
    _same_group(f, g)
    part = f.group.conjugacy()
    total = Fraction(0)
    for c in range(part.n_classes):
        total += f.values[c] * g.values[c] * int(part.sizes[c])
    return total / f.group.order


# ---------------------------------------------------------------------------
# induction to an overgroup

_EMB_CACHE: "weakref.WeakKeyDictionary[GroupEmbedding, dict]" = (
    weakref.WeakKeyDictionary()
)


def _emb_data(emb: GroupEmbedding) -> dict:
    data = _EMB_CACHE.get(emb)
    if data is None:
        data = {}
        _EMB_CACHE[emb] = data
    return data


def source_class_of_target(emb: GroupEmbedding) -> np.ndarray:
    """For each target element: its source class id, or -1 outside the image."""
    data = _emb_data(emb)
    if "src_class" not in data:
        out = np.full(emb.target.order, -1, dtype=np.int32)
        src_classes = emb.source.conjugacy().class_of
        out[emb.img] = src_classes
        data["src_class"] = out
    return data["src_class"]


def _fusion_counts(emb: GroupEmbedding) -> np.ndarray:
    """counts[C_target, c_source] = size of (image of class c) meeting C_target."""
    data = _emb_data(emb)
    if "fusion" not in data:
        tgt_class = emb.target.conjugacy().class_of
        src_class = emb.source.conjugacy().class_of
        n_t = emb.target.conjugacy().n_classes
        n_s = emb.source.conjugacy().n_classes
        counts = np.zeros((n_t, n_s), dtype=np.int64)
        for s_elem in emb.source.elements():
            counts[tgt_class[emb.img[s_elem]], src_class[s_elem]] += 1
        data["fusion"] = counts
    return data["fusion"]


def _defloop_counts(emb: GroupEmbedding) -> np.ndarray:
    """counts[C_target, c_source] = #{g in target : g^-1 a g in image with class c}."""
    data = _emb_data(emb)
    if "defloop" not in data:
        Gp = emb.target
        src_class = source_class_of_target(emb)
        part = Gp.conjugacy()
        n_s = emb.source.conjugacy().n_classes
        counts = np.zeros((part.n_classes, n_s), dtype=np.int64)
        for c, rep in enumerate(part.reps):
            a = int(rep)
            for g in Gp.elements():
                y = Gp.mul(Gp.mul(Gp.inv(g), a), g)
                sc = src_class[y]
                if sc >= 0:
                    counts[c, sc] += 1
        data["defloop"] = counts
    return data["defloop"]


def induce(t: ClassFunction, emb: GroupEmbedding, method: str = "auto") -> ClassFunction:
    """Induced class function on the target of the embedding.

    method "definition" averages conjugates over the whole target group;
    "classes" uses the class-size transfer formula.  "auto" picks
    "definition" below INDUCE_FULL_LOOP_CAP, "classes" above (the conjugation
    sums are cached per embedding, so repeated calls are cheap either way).
    """
    if t.group is not emb.source:
        raise ValueError("class function is not on the embedding source")
    if method == "auto":
        method = "definition" if emb.target.order <= INDUCE_FULL_LOOP_CAP else "classes"
    Gp = emb.target
    part = Gp.conjugacy()
    if method == "definition":
        counts = _defloop_counts(emb)
        values = tuple(
            sum(
                (t.values[c] * int(counts[ct, c]) for c in range(counts.shape[1])),
                Fraction(0),
            )
            / emb.source.order
            for ct in range(part.n_classes)
        )
    elif method == "classes":
        counts = _fusion_counts(emb)
        values = tuple(
            Fraction(Gp.order, emb.source.order * int(part.sizes[ct]))
            * sum(
                (t.values[c] * int(counts[ct, c]) for c in range(counts.shape[1])),
                Fraction(0),
            )
            for ct in range(part.n_classes)
        )
    else:
        raise ValueError(f"unknown induction method {method!r}")
    return ClassFunction(Gp, values)
