"""Frobenius records and the coset-orbit splitting of rational primes.

A prime with Frobenius element g in the ambient group splits in the fixed
field of the subgroup according to the orbits of <g> on the left cosets:
an orbit of length f contributes a prime of residue degree f whose Frobenius
class in the subgroup is the class of x^-1 g^f x for an orbit representative x.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from ..classfun import ClassFunction, induce, source_class_of_target
from ..groups import CosetSpace, GroupEmbedding, coset_space


@dataclass(frozen=True)
class FrobeniusRecord:
    """One rational prime with its ambient Frobenius class and split data."""

    p: int
    g_class: int
    splits: tuple[tuple[int, int], ...]  # (residue degree f, class id in G)
    g: int | None = None  # sampled element (synthetic mode only)


def split_prime(
    g: int, cosets: CosetSpace, emb: GroupEmbedding | None = None
) -> list[tuple[int, int]]:
    """Orbit decomposition of <g> acting on the cosets, with Frobenius classes.

    In debug mode the class is recomputed from a second orbit representative,
    which must agree up to conjugacy in the subgroup.
    """
    if emb is None:
        emb = cosets.embedding
    Gp = emb.target
    src_class = source_class_of_target(emb)
    act = cosets.act_vec(g)
    n = cosets.n_cosets
    seen = np.zeros(n, dtype=bool)
    out: list[tuple[int, int]] = []
    for c0 in range(n):
        if seen[c0]:
            continue
        orbit = [c0]
        c = int(act[c0])
        seen[c0] = True
        while c != c0:
            seen[c] = True
            orbit.append(c)
            c = int(act[c])
        f = len(orbit)
        x = int(cosets.reps[c0])
        gf = Gp.pow(g, f)
        phi = Gp.mul(Gp.mul(Gp.inv(x), gf), x)
        cls = int(src_class[phi])
        if cls < 0:
            raise AssertionError("orbit residue fell outside the subgroup image")
        if __debug__ and emb.source.order > 1:
            x2 = Gp.mul(x, int(emb.img[1]))  # same coset, different representative
            phi2 = Gp.mul(Gp.mul(Gp.inv(x2), gf), x2)
            if int(src_class[phi2]) != cls:
                raise AssertionError("Frobenius class depends on the representative")
        out.append((f, cls))
    return sorted(out)


class SplitData:
    """Per-embedding tables: orbit splits by ambient conjugacy class."""

    def __init__(self, emb: GroupEmbedding):
        self.embedding = emb
        self.cosets = coset_space(emb)
        self.n_src_classes = emb.source.conjugacy().n_classes
        part = emb.target.conjugacy()
        self.n_tgt_classes = part.n_classes
        reps = np.asarray(part.reps, dtype=np.int64)
        counts = self._batch_counts(reps)
        self.fmax = counts.shape[1] - 1
        self.class_counts = counts  # (tgt class, f, src class) orbit counts
        table = []
        for k in range(self.n_tgt_classes):
            row = []
            for f in range(1, counts.shape[1]):
                for c in range(self.n_src_classes):
                    m = int(counts[k, f, c])
                    if m:
                        row.append((f, c, m))
            table.append(tuple(row))
            if sum(f * m for f, _, m in row) != emb.index():
                raise AssertionError("orbit sizes do not sum to the coset index")
        self.split_table = table

    def _kernel_args(self):
        emb = self.embedding
        Gp = emb.target
        b = Gp._b
        skeys, korder = b.sorted_keys()
        rep_perms = b.perms[self.cosets.reps]
        rep_inv = np.stack(
            [np.argsort(b.perms[int(r)]).astype(np.uint8) for r in self.cosets.reps]
        )
        img_class = source_class_of_target(emb)
        return (
            b.perms,
            skeys,
            korder,
            rep_perms,
            rep_inv,
            self.cosets.coset_of,
            img_class,
        )

    def _batch_counts(self, g_indices: np.ndarray) -> np.ndarray:
        emb = self.embedding
        Gp = emb.target
        if Gp.backend == "perm" and Gp._b.degree <= 16:
            return kernels.split_counts_batch(
                *self._kernel_args(),
                g_indices,
                Gp.orders(),
                self.n_src_classes,
            )
        fmax = max(int(Gp.orders()[g]) for g in g_indices) if len(g_indices) else 1
        out = np.zeros((len(g_indices), fmax + 1, self.n_src_classes), dtype=np.int32)
        for i, g in enumerate(g_indices):
            for f, c in split_prime(int(g), self.cosets, emb):
                out[i, f, c] += 1
        return out

    def splits_for_class(self, k: int) -> tuple[tuple[int, int], ...]:
        out = []
        for f, c, m in self.split_table[k]:
            out.extend([(f, c)] * m)
        return tuple(sorted(out))

    def check_elements(self, g_indices: np.ndarray) -> bool:
        """Recompute splits for arbitrary elements and compare with the class
        tables (the splits are class functions of the ambient element)."""
        if len(g_indices) == 0:
            return True
        counts = self._batch_counts(np.asarray(g_indices, dtype=np.int64))
        tgt_class = self.embedding.target.conjugacy().class_of
        for i, g in enumerate(g_indices):
            k = int(tgt_class[int(g)])
            want = self.class_counts[k]
            got = counts[i]
            fm = min(want.shape[0], got.shape[0])
            if not np.array_equal(want[:fm], got[:fm]):
                return False
            if want[fm:].any() or got[fm:].any():
                return False
        return True


def per_prime_induction_identity(
    g: int,
    t: ClassFunction,
    emb: GroupEmbedding,
    kmax: int,
    cosets: CosetSpace | None = None,
    t_plus: ClassFunction | None = None,
) -> bool:
    """For every 1 <= k <= kmax, the orbit-weighted sums of t at powers of the
    orbit residues must equal the induced function at g^k."""
    if cosets is None:
        cosets = coset_space(emb)
    if t_plus is None:
        t_plus = induce(t, emb)
    Gp = emb.target
    G = emb.source
    splits = split_prime(g, cosets, emb)
    part = G.conjugacy()
    pow_cache = {}
    for k in range(1, kmax + 1):
        lhs = 0
        for f, c in splits:
            if k % f:
                continue
            j = k // f
            key = (c, j)
            if key not in pow_cache:
                rep = int(part.reps[c])
                pow_cache[key] = G.class_of(G.pow(rep, j))
            lhs += f * t.values[pow_cache[key]]
        if lhs != t_plus(Gp.pow(g, k)):
            return False
    return True
