"""Checkpointed prime-ideal counting series with exact integer accumulation.

Counts are reduced to per-ambient-class threshold counts N_k(y): every series
value at a checkpoint x is an exact integer combination of N_k at integer
roots of x, so identities can be checked with tolerance zero.  Logarithmic
weights are carried in 2^-32 fixed point, which keeps merges associative and
the output independent of segmentation and thread count.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .. import classfun as cf, kernels
from ..props import DichotomyVerdict, is_squarefree, mobius
from .frobenius import per_prime_induction_identity
from .primes import default_checkpoints, int_nth_root

LOG_FP_SCALE = 2**32


def _sign(v) -> int:
    return (v > 0) - (v < 0)


class ChebotarevAccumulator:
    """One pass over a Frobenius-class source, reduced to exact threshold
    counts per ambient conjugacy class (plus a level-exact sign scan for the
    series' own class function)."""

    def __init__(self, source, checkpoints, t: cf.ClassFunction | None = None,
                 verify: bool = True):
        emb = source.embedding
        self.source = source
        self.embedding = emb
        self.split_data = source.split_data
        self.checkpoints = sorted(int(x) for x in checkpoints)
        if self.checkpoints[0] < 2:
            raise ValueError("checkpoints start at 2")
        if self.checkpoints[-1] > source.xmax:
            raise ValueError("checkpoints cannot exceed the source range")
        self.xmax = source.xmax
        xtop = self.checkpoints[-1]
        self.jmax = xtop.bit_length() - 1  # floor(log2(xtop))
        roots = {1}
        for x in self.checkpoints:
            for m in range(1, x.bit_length()):
                roots.add(int_nth_root(x, m))
        self.thresholds = np.asarray(sorted(roots), dtype=np.int64)
        self._thr_pos = {int(y): i for i, y in enumerate(self.thresholds)}
        K = self.split_data.n_tgt_classes
        nT = len(self.thresholds)
        counts = np.zeros((K, nT + 1), dtype=np.int64)
        logfp = np.zeros((K, nT + 1), dtype=np.int64)
        self.n_primes = 0

        self._t = t
        sign_cfg = self._prepare_sign_scan(t)
        for primes, classes in source.iter_class_segments():
            if len(primes) == 0:
                continue
            self.n_primes += len(primes)
            if verify and hasattr(source, "spot_check"):
                if not source.spot_check(primes):
                    raise AssertionError("per-prime split spot check failed")
            pos = np.searchsorted(self.thresholds, primes, side="left")
            flat = classes * (nT + 1) + pos
            counts += np.bincount(flat, minlength=K * (nT + 1)).reshape(K, nT + 1)
            lp = np.round(np.log(primes.astype(np.float64)) * LOG_FP_SCALE).astype(
                np.int64
            )
            np.add.at(logfp.reshape(-1), flat, lp)
            self._collect_sign_events(sign_cfg, primes, classes)
        self.counts = np.cumsum(counts[:, :-1], axis=1)
        self.logfp = np.cumsum(logfp[:, :-1], axis=1)
        self.class_totals = self.counts[:, -1].copy()
        self._finish_sign_scan(sign_cfg)
        self._powcls = cf.power_class_table(emb.source, max(self.jmax, 1))
        if verify and t is not None:
            self._verify_class_identities(t)

    # -- setup checks ---------------------------------------------------------

    def _verify_class_identities(self, t: cf.ClassFunction, kmax: int = 20) -> None:
        emb = self.embedding
        t_plus = cf.induce(t, emb)
        reps = emb.target.conjugacy().reps
        for rep in reps:
            ok = per_prime_induction_identity(
                int(rep), t, emb, kmax, cosets=self.split_data.cosets, t_plus=t_plus
            )
            if not ok:
                raise AssertionError("per-class induction identity failed")

    # -- sign scan ------------------------------------------------------------

    def _prepare_sign_scan(self, t: cf.ClassFunction | None):
        if t is None:
            return None
        tn, td = t.scaled_ints()
        K = self.split_data.n_tgt_classes
        fmax = self.split_data.fmax
        delta = np.zeros((fmax + 1, K), dtype=np.int64)
        for k in range(K):
            for f, c, m in self.split_data.split_table[k]:
                delta[f, k] += m * int(tn[c])
        caps = [0, 0] + [int_nth_root(self.xmax, f) for f in range(2, fmax + 1)]
        return {
            "delta": delta,
            "den": td,
            "caps": caps,
            "f1": [] if delta[1].any() else None,
            "fhi": [],
        }

    def _collect_sign_events(self, cfg, primes, classes) -> None:
        if cfg is None:
            return
        delta = cfg["delta"]
        if cfg["f1"] is not None:
            w = delta[1][classes]
            nz = w != 0
            if nz.any():
                cfg["f1"].append((primes[nz].copy(), w[nz]))
        for f in range(2, delta.shape[0]):
            if not delta[f].any():
                continue
            cap = cfg["caps"][f]
            if primes[0] > cap:
                continue
            sel = primes <= cap
            w = delta[f][classes[sel]]
            nz = w != 0
            if nz.any():
                cfg["fhi"].append((primes[sel][nz] ** f, w[nz]))
        return

    def _finish_sign_scan(self, cfg) -> None:
        if cfg is None:
            self.last_sign_change = None
            self.min_level_value = None
            return
        chunks = (cfg["f1"] or []) + cfg["fhi"]
        if not chunks:
            self.last_sign_change = None
            self.min_level_value = Fraction(0)
            return
        levels = np.concatenate([c[0] for c in chunks])
        weights = np.concatenate([c[1] for c in chunks])
        order = np.argsort(levels, kind="stable")
        levels = levels[order]
        weights = weights[order]
        running = np.cumsum(weights)
        signs = np.sign(running)
        prev = np.concatenate(([0], signs[:-1]))
        changes = np.nonzero(signs != prev)[0]
        self.last_sign_change = int(levels[changes[-1]]) if len(changes) else None
        self.min_level_value = Fraction(int(running.min()), cfg["den"])

    # -- exact evaluation -----------------------------------------------------

    def _nk(self, y: int) -> np.ndarray:
        """N_k(y): primes up to y per ambient class (y must lie on the grid)."""
        if y < 2:
            return np.zeros(self.split_data.n_tgt_classes, dtype=np.int64)
        return self.counts[:, self._thr_pos[y]]

    def _sk(self, y: int) -> np.ndarray:
        if y < 2:
            return np.zeros(self.split_data.n_tgt_classes, dtype=np.int64)
        return self.logfp[:, self._thr_pos[y]]

    def pi_by_src_class(self, x: int, mult: int = 1) -> np.ndarray:
        """Prime-ideal counts with norm <= x^(1/mult), per subgroup class."""
        out = np.zeros(self.split_data.n_src_classes, dtype=np.int64)
        for k, row in enumerate(self.split_data.split_table):
            for f, c, m in row:
                nk = self._nk(int_nth_root(x, mult * f))
                out[c] += m * int(nk[k])
        return out

    def theta_by_src_class(self, x: int, mult: int = 1, log_weight: bool = False):
        dtype = np.float64 if log_weight else np.int64
        out = np.zeros(self.split_data.n_src_classes, dtype=dtype)
        for k, row in enumerate(self.split_data.split_table):
            for f, c, m in row:
                y = int_nth_root(x, mult * f)
                val = self._sk(y)[k] / LOG_FP_SCALE if log_weight else self._nk(y)[k]
                out[c] += m * f * val
        return out

    def psi_by_src_class(self, x: int, mult: int = 1, log_weight: bool = False):
        dtype = np.float64 if log_weight else np.int64
        out = np.zeros(self.split_data.n_src_classes, dtype=dtype)
        for k, row in enumerate(self.split_data.split_table):
            for f, c, m in row:
                j = 1
                while True:
                    y = int_nth_root(x, mult * f * j)
                    if y < 2:
                        break
                    cpow = int(self._powcls[c, j])
                    val = self._sk(y)[k] / LOG_FP_SCALE if log_weight else self._nk(y)[k]
                    out[cpow] += m * f * val
                    j += 1
        return out

    def eval_t(self, by_class: np.ndarray, t: cf.ClassFunction) -> Fraction:
        tn, td = t.scaled_ints()
        if by_class.dtype == np.float64:
            return float(np.dot(by_class, tn) / td)
        return Fraction(int(np.dot(by_class.astype(object), tn.astype(object))), td)

    def pi_t(self, x: int, t: cf.ClassFunction, mult: int = 1) -> Fraction:
        return self.eval_t(self.pi_by_src_class(x, mult), t)

    def theta_int_t(self, x: int, t: cf.ClassFunction, mult: int = 1) -> Fraction:
        return self.eval_t(self.theta_by_src_class(x, mult), t)

    def psi_int_t(self, x: int, t: cf.ClassFunction, mult: int = 1) -> Fraction:
        return self.eval_t(self.psi_by_src_class(x, mult), t)

    def frequency_sigmas(self) -> np.ndarray:
        """|observed - expected| / sigma per ambient class, binomial model."""
        Gp = self.embedding.target
        sizes = Gp.conjugacy().sizes
        q = sizes / Gp.order
        n = self.n_primes
        expected = n * q
        sigma = np.sqrt(np.maximum(n * q * (1 - q), 1e-12))
        return np.abs(self.class_totals - expected) / sigma


# ---------------------------------------------------------------------------
# series assembly


@dataclass(eq=False)
class CountingSeries:
    """Checkpointed values of the weighted counting functions for one class
    function, with the predicted leading term when a bias verdict is given."""

    checkpoints: list[int]
    c1: int
    c2: int
    pi_t: list[Fraction]
    theta_int: list[Fraction]
    psi_int: list[Fraction]
    theta_log: list[float]
    psi_log: list[float]
    pi_c1_weighted: list[Fraction]
    pi_c2_weighted: list[Fraction]
    predicted: list[float] | None
    last_sign_change: int | None
    verdict: DichotomyVerdict | None
    meta: dict
    accumulator: ChebotarevAccumulator = field(repr=False)

    def ratio(self) -> list[float | None]:
        if self.predicted is None:
            return [None] * len(self.checkpoints)
        return [
            float(p) / pred if pred else None
            for p, pred in zip(self.pi_t, self.predicted)
        ]

    def csv_rows(self) -> list[list]:
        header = [
            "x",
            "pi_t",
            "theta_t_intweight",
            "psi_t_intweight",
            "pi_C1_weighted",
            "pi_C2_weighted",
            "predicted",
            "ratio",
        ]
        rows: list[list] = [header]
        ratios = self.ratio()
        for i, x in enumerate(self.checkpoints):
            pred = self.predicted[i] if self.predicted is not None else ""
            rat = ratios[i] if ratios[i] is not None else ""
            rows.append(
                [
                    x,
                    _num(self.pi_t[i]),
                    _num(self.theta_int[i]),
                    _num(self.psi_int[i]),
                    _num(self.pi_c1_weighted[i]),
                    _num(self.pi_c2_weighted[i]),
                    pred,
                    rat,
                ]
            )
        return rows

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            for row in self.csv_rows():
                fh.write(",".join(str(v) for v in row) + "\n")

    def summary(self) -> dict:
        out = {
            "verdict": self.verdict.case if self.verdict else None,
            "d": self.verdict.d if self.verdict else None,
            "coefficient": (
                str(self.verdict.mu_d * self.verdict.coefficient)
                if self.verdict and self.verdict.case == "ExtremeBias"
                else None
            ),
            "last_sign_change": self.last_sign_change,
            "skipped_ramified": self.meta.get("skipped_ramified", 0),
            "seed": self.meta.get("seed"),
            "xmax": self.meta.get("xmax"),
        }
        return out


def _num(v):
    if isinstance(v, Fraction) and v.denominator == 1:
        return v.numerator
    return v


def counting_series(
    source,
    t: cf.ClassFunction,
    c1: int,
    c2: int,
    checkpoints=None,
    verdict: DichotomyVerdict | None = None,
    verify: bool = True,
) -> CountingSeries:
    """Accumulate the source and evaluate the counting series for t."""
    if checkpoints is None:
        checkpoints = default_checkpoints(source.xmax)
    acc = ChebotarevAccumulator(source, checkpoints, t=t, verify=verify)
    G = source.embedding.source
    part = G.conjugacy()
    w1 = Fraction(G.order, int(part.sizes[c1]))
    w2 = Fraction(G.order, int(part.sizes[c2]))
    pi_t, th_i, ps_i, th_l, ps_l, p1, p2 = [], [], [], [], [], [], []
    for x in acc.checkpoints:
        by_class = acc.pi_by_src_class(x)
        pi_t.append(acc.eval_t(by_class, t))
        th_i.append(acc.theta_int_t(x, t))
        ps_i.append(acc.psi_int_t(x, t))
        th_l.append(acc.eval_t(acc.theta_by_src_class(x, log_weight=True), t))
        ps_l.append(acc.eval_t(acc.psi_by_src_class(x, log_weight=True), t))
        p1.append(w1 * int(by_class[c1]))
        p2.append(w2 * int(by_class[c2]))
    predicted = None
    if verdict is not None and verdict.case == "ExtremeBias":
        lead = verdict.mu_d * verdict.coefficient
        predicted = [
            float(lead) * x ** (1.0 / verdict.d) / math.log(x)
            for x in acc.checkpoints
        ]
    meta = {
        "mode": source.mode,
        "seed": getattr(source, "seed", None),
        "xmax": source.xmax,
        "skipped_ramified": getattr(source, "skipped_ramified", 0),
        "n_primes": acc.n_primes,
        "kernel_backend": kernels.BACKEND,
    }
    return CountingSeries(
        checkpoints=acc.checkpoints,
        c1=c1,
        c2=c2,
        pi_t=pi_t,
        theta_int=th_i,
        psi_int=ps_i,
        theta_log=th_l,
        psi_log=ps_l,
        pi_c1_weighted=p1,
        pi_c2_weighted=p2,
        predicted=predicted,
        last_sign_change=acc.last_sign_change,
        verdict=verdict,
        meta=meta,
        accumulator=acc,
    )


def counting_series_from_records(records, emb, t: cf.ClassFunction, checkpoints):
    """Reference accumulation straight from per-prime records (slow path;
    used to cross-check the threshold-count engine)."""
    checkpoints = sorted(int(x) for x in checkpoints)
    part = emb.source.conjugacy()
    out = [Fraction(0)] * len(checkpoints)
    for rec in records:
        for f, c in rec.splits:
            norm = rec.p**f
            if norm > checkpoints[-1]:
                continue
            val = t.values[c]
            if val == 0:
                continue
            for i, x in enumerate(checkpoints):
                if norm <= x:
                    out[i] += val
    return out


def leading_term(t: cf.ClassFunction, verdict: DichotomyVerdict):
    """Exact leading coefficient mu(d) <t, r_d> and the comparison curve."""
    if verdict.case != "ExtremeBias":
        raise ValueError("leading term requires an ExtremeBias verdict")
    rd = cf.root_count(t.group, verdict.d)
    coeff = Fraction(verdict.mu_d) * cf.inner_product(t, rd)

    def curve(x: float) -> float:
        return float(coeff) * x ** (1.0 / verdict.d) / math.log(x)

    return coeff, curve


# ---------------------------------------------------------------------------
# exact identity checks


def inclusion_exclusion_check(acc: ChebotarevAccumulator, t: cf.ClassFunction) -> bool:
    """theta(x; t) equals the Moebius-alternating sum of psi(x^(1/l); t o f_l)
    at every checkpoint, exactly (integer-weight variants)."""
    for x in acc.checkpoints:
        lhs = acc.theta_int_t(x, t)
        rhs = Fraction(0)
        for ell in range(1, x.bit_length()):
            mu = mobius(ell)
            if mu == 0:
                continue
            rhs += mu * acc.psi_int_t(x, cf.power_pullback(t, ell), mult=ell)
        if lhs != rhs:
            return False
    return True


def _sf_residues_coprime(exp: int, p: int) -> list[int]:
    """Residues mod exp realized by squarefree integers coprime to p."""
    L = exp * p // math.gcd(exp, p)
    out = set()
    for m in range(1, L + 1):
        if m % p == 0:
            continue
        if is_squarefree(math.gcd(m, L)):
            out.add(m % exp or exp)
    return sorted(out)


def telescoping_check(
    acc: ChebotarevAccumulator, c_a: int, c_b: int, p: int
) -> tuple[bool, dict]:
    """Exact decomposition of the counting series into power-residue parts.

    Verifies the vanishing hypotheses first; reports the offending power index
    if they fail.  Two identities are then checked with tolerance zero at
    every checkpoint, writing s_q for the scaled indicator pulled back along
    x -> x^q:

      theta_int(x; t) = sum_{1<=k<=u} theta_int(x^(1/p^k); s_{p^k})
      pi(x; t)        = sum_{1<=k<=u} p^(-k) pi(x^(1/p^k); s_{p^k})

    The first is the log-weighted identity with log(norm) replaced by the
    formal weight f per ideal.  In the second, partial summation of the first
    divides the jump of the k-th term at level m^(p^k) by log(m^(p^k)), which
    is p^k log m; hence the p^(-k) weights.  (Stated without those weights the
    pi identity is false at finite x; see the decisions ledger.)  Positivity
    of pi(x; t) is asserted at every accumulated level.
    """
    emb = acc.embedding
    G = emb.source
    t = cf.difference_indicator(G, c_a, c_b)
    s = cf.scaled_indicator(G, c_b)
    info: dict = {"p": p, "c_a": c_a, "c_b": c_b}
    if cf.root_count(G, p).values[c_a] != 0:
        info["failed_hypothesis"] = f"class {c_a} has p-th roots"
        return False, info
    exp = G.exponent()
    for m in _sf_residues_coprime(exp, p):
        if not cf.induce(cf.power_pullback(t, m), emb).is_zero():
            info["failed_hypothesis"] = f"induced pullback at power {m} is nonzero"
            return False, info
    vp, e = 0, exp
    while e % p == 0:
        e //= p
        vp += 1
    u = 0
    while u < vp and cf.root_count(G, p ** (u + 1)).values[c_b] > 0:
        u += 1
    info["u"] = u
    if u == 0:
        info["failed_hypothesis"] = f"class {c_b} has no p-th roots"
        return False, info
    if u == vp and cf.root_count(G, p ** (u + 1)).values[c_b] > 0:
        info["failed_hypothesis"] = "no finite decomposition depth"
        return False, info
    if not cf.power_pullback(s, p ** (u + 1)).is_zero():
        info["failed_hypothesis"] = "pullback beyond depth u is not zero"
        return False, info
    pullbacks = {k: cf.power_pullback(s, p**k) for k in range(1, u + 1)}
    decomposition = []
    ok = True
    for x in acc.checkpoints:
        lhs = acc.pi_t(x, t)
        terms = [acc.pi_t(x, pullbacks[k], mult=p**k) for k in range(1, u + 1)]
        rhs = sum(
            (Fraction(1, p**k) * terms[k - 1] for k in range(1, u + 1)), Fraction(0)
        )
        th_lhs = acc.theta_int_t(x, t)
        th_rhs = sum(
            (acc.theta_int_t(x, pullbacks[k], mult=p**k) for k in range(1, u + 1)),
            Fraction(0),
        )
        decomposition.append(
            {"x": x, "pi_t": lhs, "terms": terms, "theta_int": th_lhs}
        )
        if lhs != rhs or th_lhs != th_rhs or lhs < 0:
            ok = False
    info["decomposition"] = decomposition
    if acc.min_level_value is not None and acc.min_level_value < 0:
        ok = False
        info["negative_level"] = True
    return ok, info
