"""Command-line interface: group inspection, property checks, dichotomy
classification, bias simulation, effective thresholds, and the verification
suites.

Elements are written as words over a group's declared generators, e.g.
"g0*g1^2"; `^` binds tighter than `*` and "e" is the identity.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import classfun as cf, props, verify
from .chebotarev import (
    LinnikInputs,
    QuarticSource,
    SyntheticSource,
    counting_series,
    default_checkpoints,
    inclusion_exclusion_check,
    linnik_bound,
)
from .groups import (
    FiniteGroup,
    GroupConstructionError,
    GroupEmbedding,
    abelian_invariants,
    build_group,
    cayley_embedding,
    subgroup_closure,
)

DEFAULT_QUARTIC = [1, 0, 0, -1, -1]  # X^4 - X - 1, ambient S4


def _emit(payload: dict, args) -> None:
    if args.json:
        print(json.dumps(payload, indent=2, default=str))
        return
    for key, value in payload.items():
        print(f"{key}: {value}")


def _resolve_embedding(args) -> tuple[GroupEmbedding, FiniteGroup]:
    """Build (embedding, subgroup) from --cayley-of or --spec-plus/--subgroup-gens."""
    if getattr(args, "cayley_of", None):
        G = build_group(args.cayley_of)
        _, emb = cayley_embedding(G)
        return emb, G
    if not getattr(args, "spec_plus", None):
        raise GroupConstructionError("need --cayley-of or --spec-plus")
    Gp = build_group(args.spec_plus)
    gens = [Gp.element_from_word(w.strip()) for w in (args.subgroup_gens or "").split(",") if w.strip()]
    if not gens:
        raise GroupConstructionError("need --subgroup-gens words for the subgroup")
    G, emb = subgroup_closure(Gp, gens)
    return emb, G


def _class_of_word(emb: GroupEmbedding, word: str) -> int:
    """Class id in the subgroup of an element given as a word over the
    ambient group's generators."""
    Gp = emb.target
    elem = Gp.element_from_word(word)
    img = emb.img.tolist()
    if elem not in img:
        raise GroupConstructionError(f"element {word!r} is not in the subgroup")
    return emb.source.class_of(img.index(elem))


def cmd_group(args) -> int:
    G = build_group(args.spec)
    part = G.conjugacy()
    hist = Counter(int(o) for o in G.orders())
    payload = {
        "name": G.name,
        "order": G.order,
        "backend": G.backend,
        "n_classes": part.n_classes,
        "class_sizes": sorted(int(s) for s in part.sizes),
        "element_order_histogram": dict(sorted(hist.items())),
        "generators": [G.word(g) for g in G.generators],
    }
    if G.is_abelian():
        payload["abelian_invariants"] = abelian_invariants(G)
    _emit(payload, args)
    return 0


def cmd_check(args) -> int:
    G = build_group(args.spec)
    if args.property == "P":
        witness = props.satisfies_p(G, args.d)
        payload = {"property": f"P({args.d})", "group": G.name, "found": witness is not None}
        if witness:
            payload["witness"] = witness.to_json()
            payload["replay"] = witness.replay()
    else:
        witness = props.satisfies_p_plus(G, args.p, mode=args.mode)
        is_p_group = props._is_p_group(G, args.p)
        payload = {
            "property": f"P+({args.p})",
            "group": G.name,
            "mode": args.mode,
            "found": witness is not None,
            "search_complete": args.mode == "criterion" or is_p_group,
        }
        if witness:
            payload["witness"] = witness.to_json()
            payload["replay"] = witness.replay()
    _emit(payload, args)
    return 0


def cmd_classify(args) -> int:
    if args.cayley:
        G = build_group(args.spec)
        emb_or_virtual = props.VirtualCayley(G)
        src_group = G
        c1 = src_group.class_of(src_group.element_from_word(args.c1))
        c2 = src_group.class_of(src_group.element_from_word(args.c2))
    else:
        emb, src_group = _resolve_embedding(args)
        emb_or_virtual = emb
        c1 = _class_of_word(emb, args.c1)
        c2 = _class_of_word(emb, args.c2)
    verdict = props.classify_dichotomy(emb_or_virtual, c1, c2)
    payload = verdict.to_json()
    payload["group"] = src_group.name
    _emit(payload, args)
    return 0


def cmd_construct(args) -> int:
    if args.construction == "gplus-ab":
        H = json.loads(args.H) if args.H and args.H.strip().startswith("{") else args.H
        gplus, emb, a, b = props.construct_gplus_ab(args.p, args.n, args.m, H)
        witness = props.PropertyWitness("P", args.p, a, b, emb.source)
        payload = {
            "construction": "gplus-ab",
            "gplus_order": gplus.order,
            "subgroup_order": emb.source.order,
            "subgroup_invariants": abelian_invariants(emb.source),
            "a": emb.source.word(a),
            "b": emb.source.word(b),
            "conjugate_in_gplus": gplus.class_of(int(emb.img[a])) == gplus.class_of(int(emb.img[b])),
            "witness_replay": witness.replay(),
        }
    else:
        model = props.construct_appendix_group(args.m, args.n)
        gamma = model.gamma
        ok1 = cf.root_count(model.g_embedding.source, 2).values[
            model.g_embedding.source.class_of(model.g_embedding.source_index_of(model.sigma1))
        ] == 0
        ok2 = cf.root_count(model.g_embedding.source, 2).values[
            model.g_embedding.source.class_of(model.g_embedding.source_index_of(model.sigma2))
        ] > 0
        payload = {
            "construction": "appendix",
            "order": gamma.order,
            "inner_order": model.gplus_embedding.source.order,
            "subgroup_order": model.g_embedding.source.order,
            "sigma1": gamma.word(model.sigma1),
            "sigma2": gamma.word(model.sigma2),
            "sigma1_has_no_square_root_in_subgroup": bool(ok1),
            "sigma2_has_square_root_in_subgroup": bool(ok2),
        }
    _emit(payload, args)
    return 0


CONFIG_FIELDS = {
    "group_plus",
    "subgroup_gens",
    "cayley_of",
    "c1",
    "c2",
    "mode",
    "poly",
    "xmax",
    "seed",
    "checkpoints",
}


def _load_run_config(args) -> dict:
    cfg: dict = {}
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
        unknown = set(cfg) - CONFIG_FIELDS
        if unknown:
            raise GroupConstructionError(f"unknown config fields {sorted(unknown)}")
    for key in ("c1", "c2", "cayley_of"):
        if getattr(args, key, None):
            cfg[key] = getattr(args, key)
    if getattr(args, "spec_plus", None):
        cfg["group_plus"] = args.spec_plus
    if getattr(args, "subgroup_gens", None):
        cfg["subgroup_gens"] = [w.strip() for w in args.subgroup_gens.split(",")]
    if args.xmax is not None:
        cfg["xmax"] = int(float(args.xmax))
    if args.seed is not None:
        cfg["seed"] = args.seed
    if getattr(args, "checkpoints", None):
        cfg["checkpoints"] = args.checkpoints
    if getattr(args, "poly", None):
        cfg["poly"] = [int(c) for c in args.poly.split(",")]
    cfg.setdefault("seed", 1)
    cfg.setdefault("xmax", 10**6)
    return cfg


def _run_simulation(cfg: dict, mode: str, args) -> int:
    if mode == "quartic":
        coeffs = cfg.get("poly", DEFAULT_QUARTIC)
        if cfg.get("group_plus"):
            if not cfg.get("subgroup_gens") or "c1" not in cfg or "c2" not in cfg:
                raise GroupConstructionError(
                    "quartic mode with group_plus needs subgroup_gens, c1, c2"
                )
            Gp = build_group(cfg["group_plus"])
            gens = [Gp.element_from_word(w) for w in cfg["subgroup_gens"]]
            G, emb = subgroup_closure(Gp, gens)
            c_a = _class_of_word(emb, cfg["c1"])
            c_b = _class_of_word(emb, cfg["c2"])
        else:
            from .verify import dihedral_in_s4

            _, G, emb, c_a, c_b = dihedral_in_s4()
            if "c1" in cfg:
                c_a = _class_of_word(emb, cfg["c1"])
            if "c2" in cfg:
                c_b = _class_of_word(emb, cfg["c2"])
        source = QuarticSource(coeffs, emb, cfg["xmax"], threads=args.threads)
    else:
        if cfg.get("cayley_of"):
            G = build_group(cfg["cayley_of"])
            _, emb = cayley_embedding(G)
        elif cfg.get("group_plus") and cfg.get("subgroup_gens"):
            Gp = build_group(cfg["group_plus"])
            gens = [Gp.element_from_word(w) for w in cfg["subgroup_gens"]]
            G, emb = subgroup_closure(Gp, gens)
        else:
            raise GroupConstructionError(
                "synthetic mode needs cayley_of, or group_plus with subgroup_gens"
            )
        if "c1" not in cfg or "c2" not in cfg:
            raise GroupConstructionError("synthetic mode needs c1 and c2")
        if cfg.get("cayley_of"):
            # words over the subgroup's own generators
            c_a = G.class_of(G.element_from_word(cfg["c1"]))
            c_b = G.class_of(G.element_from_word(cfg["c2"]))
        else:
            c_a = _class_of_word(emb, cfg["c1"])
            c_b = _class_of_word(emb, cfg["c2"])
        source = SyntheticSource(emb, cfg["seed"], cfg["xmax"], threads=args.threads)
    if c_a == c_b:
        raise GroupConstructionError("c1 and c2 must name distinct classes")
    t = cf.difference_indicator(G, c_a, c_b)
    verdict = props.verdict_from_embedding(emb, c_a, c_b)
    ckpts = cfg.get("checkpoints")
    if isinstance(ckpts, int):
        ckpts = default_checkpoints(cfg["xmax"], count=ckpts)
    elif isinstance(ckpts, list):
        ckpts = [int(x) for x in ckpts]
    series = counting_series(source, t, c_a, c_b, checkpoints=ckpts, verdict=verdict)
    ok = inclusion_exclusion_check(series.accumulator, t)
    payload = series.summary()
    payload["identities_ok"] = ok
    payload["n_primes"] = series.meta["n_primes"]
    payload["kernel_backend"] = series.meta["kernel_backend"]
    if mode == "quartic":
        payload["ramified_primes"] = source.ramified_primes
        payload["max_frequency_sigma"] = float(series.accumulator.frequency_sigmas().max())
    if args.out:
        series.write_csv(args.out)
        payload["csv"] = args.out
    _emit(payload, args)
    return 0 if ok else 1


def cmd_simulate(args) -> int:
    cfg = _load_run_config(args)
    mode = cfg.get("mode", "synthetic")
    if mode not in ("synthetic", "quartic"):
        raise GroupConstructionError(f"unknown mode {mode!r}")
    return _run_simulation(cfg, mode, args)


def cmd_quartic(args) -> int:
    cfg = _load_run_config(args)
    cfg.setdefault("xmax", 10**7)
    return _run_simulation(cfg, "quartic", args)


def cmd_linnik(args) -> int:
    G = build_group(args.spec)
    c_b = G.class_of(G.element_from_word(args.class_b))
    result = linnik_bound(
        LinnikInputs(p=args.p, group=G, c_b=c_b, rd_L=args.rd, deg_L=args.deg, B=args.B)
    )
    payload = {"group": G.name, "p": args.p, "class_b": args.class_b, **result}
    _emit(payload, args)
    return 0


def cmd_verify(args) -> int:
    results = verify.run_suite(
        args.suite,
        xmax=int(float(args.xmax)) if args.xmax else None,
        cases=args.cases,
        threads=args.threads,
    )
    failed = [r for r in results if not r[1]]
    if args.json:
        print(
            json.dumps(
                [{"name": n, "passed": p, "detail": d} for n, p, d in results], indent=2
            )
        )
    else:
        for name, passed, detail in results:
            print(f"{'PASS' if passed else 'FAIL'}  {name}  [{detail}]")
        print(f"{len(results) - len(failed)}/{len(results)} checks passed")
    return 0 if not failed else 1


def _global_flags(parser, suppress: bool) -> None:
    d = argparse.SUPPRESS if suppress else None
    parser.add_argument(
        "--json", action="store_true", default=d if suppress else False,
        help="machine-readable output",
    )
    parser.add_argument("--out", default=d, help="CSV output path for series commands")
    parser.add_argument("--seed", type=int, default=d, help="synthetic-mode seed")
    parser.add_argument("--xmax", default=d, help="prime range upper bound")
    parser.add_argument(
        "--threads", type=int, default=d if suppress else 1,
        help="segment workers (speed only, never output)",
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chebbias",
        description="Finite-group bias toolkit: property checks and Frobenius-counting simulation",
    )
    _global_flags(parser, suppress=False)
    common = argparse.ArgumentParser(add_help=False)
    _global_flags(common, suppress=True)
    sub = parser.add_subparsers(dest="command", required=True)

    p_group = sub.add_parser("group", help="build and summarize a group", parents=[common])
    p_group.add_argument("--spec", required=True, help='descriptor JSON or shorthand like "catalog:Q8"')
    p_group.set_defaults(func=cmd_group)

    p_check = sub.add_parser("check", help="decide a group property", parents=[common])
    p_check.add_argument("property", choices=["P", "Pplus"])
    p_check.add_argument("--spec", required=True)
    p_check.add_argument("--d", type=int, default=2, help="squarefree root index for P")
    p_check.add_argument("--p", type=int, default=2, help="prime for Pplus")
    p_check.add_argument("--mode", choices=["search", "criterion"], default="search")
    p_check.set_defaults(func=cmd_check)

    p_classify = sub.add_parser("classify", help="equal counting vs extreme bias", parents=[common])
    p_classify.add_argument("--spec", help="subgroup descriptor (with --cayley)")
    p_classify.add_argument("--cayley", action="store_true", help="use the regular-action ambient group")
    p_classify.add_argument("--spec-plus", help="ambient group descriptor")
    p_classify.add_argument("--subgroup-gens", help="comma-separated words over ambient generators")
    p_classify.add_argument("--c1", required=True, help="element word for the first class")
    p_classify.add_argument("--c2", required=True, help="element word for the second class")
    p_classify.set_defaults(func=cmd_classify)

    p_construct = sub.add_parser("construct", help="named ambient-group constructions", parents=[common])
    p_construct.add_argument("construction", choices=["gplus-ab", "appendix"])
    p_construct.add_argument("--p", type=int, default=2)
    p_construct.add_argument("--n", type=int, default=1)
    p_construct.add_argument("--m", type=int, default=2)
    p_construct.add_argument("--H", default=None, help="abelian descriptor for the extra factor")
    p_construct.set_defaults(func=cmd_construct)

    for name, helptext in (
        ("simulate", "synthetic or quartic counting run"),
        ("quartic", "counting run from a quartic polynomial"),
    ):
        p_sim = sub.add_parser(name, help=helptext, parents=[common])
        p_sim.add_argument("--config", help="run-configuration JSON file")
        p_sim.add_argument("--cayley-of", help="subgroup descriptor; ambient is its regular action")
        p_sim.add_argument("--spec-plus", help="ambient group descriptor")
        p_sim.add_argument("--subgroup-gens", help="comma-separated words over ambient generators")
        p_sim.add_argument("--c1", help="element word for the first class")
        p_sim.add_argument("--c2", help="element word for the second class")
        p_sim.add_argument("--checkpoints", type=int, default=None, help="number of log-spaced checkpoints")
        if name == "quartic":
            p_sim.add_argument("--poly", help="comma-separated descending coefficients, monic")
        p_sim.set_defaults(func=cmd_simulate if name == "simulate" else cmd_quartic)

    p_linnik = sub.add_parser("linnik", help="effective bias threshold", parents=[common])
    p_linnik.add_argument("--p", type=int, required=True)
    p_linnik.add_argument("--spec", required=True, help="subgroup descriptor")
    p_linnik.add_argument("--class-b", required=True, help="element word for the favored class")
    p_linnik.add_argument("--rd", type=float, required=True, help="root discriminant")
    p_linnik.add_argument("--deg", type=int, required=True, help="field degree over the rationals")
    p_linnik.add_argument("--B", type=float, default=1.0, help="absolute constant (not rigorous)")
    p_linnik.set_defaults(func=cmd_linnik)

    p_verify = sub.add_parser("verify", help="run the catalog verification suites", parents=[common])
    p_verify.add_argument("--suite", required=True)
    p_verify.add_argument("--cases", type=int, default=None, help="randomized case count")
    p_verify.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for key, default in (("json", False), ("out", None), ("seed", None), ("xmax", None), ("threads", 1)):
        if not hasattr(args, key) or getattr(args, key) is None and key in ("json", "threads"):
            setattr(args, key, default)
    try:
        return args.func(args)
    except (GroupConstructionError, ValueError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
