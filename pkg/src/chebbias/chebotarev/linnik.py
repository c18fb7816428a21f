"""Effective threshold of Linnik type for the p-power bias decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .. import classfun as cf
from ..groups import FiniteGroup
from ..props import is_prime


@dataclass(eq=False)
class LinnikInputs:
    """Inputs for the effective bias threshold.

    rd_L is the root discriminant of the ambient field, deg_L its degree over
    the rationals, and B the absolute constant (not rigorous; default 1).
    """

    p: int
    group: FiniteGroup
    c_b: int
    rd_L: float
    deg_L: int
    B: float = 1.0


def linnik_bound(inputs: LinnikInputs) -> dict:
    """A1 = B (sqrt(r) log(rd_L + 2) [L:Q])^(2p), with r the number of
    subgroup classes whose p-th power lands in the favored class.

    Also reports the Littlewood-norm bound sqrt(r) |G| used to derive A1.
    """
    if not is_prime(inputs.p):
        raise ValueError("p must be prime")
    G = inputs.group
    part = G.conjugacy()
    r = 0
    for c in range(part.n_classes):
        rep = int(part.reps[c])
        if G.class_of(G.pow(rep, inputs.p)) == inputs.c_b:
            r += 1
    if r == 0:
        raise ValueError("the target class has no p-th roots; r = 0")
    a1 = inputs.B * (
        math.sqrt(r) * math.log(inputs.rd_L + 2) * inputs.deg_L
    ) ** (2 * inputs.p)
    return {
        "A1": a1,
        "r": r,
        "norm_bound": math.sqrt(r) * G.order,
        "r_p_of_target": int(cf.root_count(G, inputs.p).values[inputs.c_b]),
    }
