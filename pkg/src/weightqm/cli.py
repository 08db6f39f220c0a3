"""Command line front end. Every subcommand prints a JSON report (or a table)
and exits 0 exactly when all of its checks pass."""
from __future__ import annotations

import argparse
import itertools
import json
import sys
from pathlib import Path

from . import complexes, words
from .brooks_delta import (
    DECOMPOSITIONS,
    PieceWeight,
    brooks_qm,
    brooks_weight,
    delta_qm,
    delta_weight,
    verify_delta_axioms,
)
from .cochain import Cochain, coboundary, exponent_sum, hat, one, random_tuples, table_cochain, zero
from .coherent import CoherentPair, FragmentCorrespondence, geodesic_family, verify_coherence, verify_qmp
from .graph import Graph, GraphError
from .median import MedianComplex, TreeComplex, median_qm, median_weight
from .report import dumps
from .vanishing import (
    PreconditionError,
    cup_primitive_left,
    cup_primitive_right,
    massey_witness,
    phi_stability_check,
)
from .weights import defect_on, verify_weight, weight_qm

EXHAUSTIVE_LIMIT = 200_000


class UsageError(Exception):
    pass


def _fmt(x):
    """JSON-friendly rendering: the neutral word prints as e."""
    if isinstance(x, str):
        return words.format_word(x)
    if isinstance(x, (tuple, list)):
        return [_fmt(v) for v in x]
    if isinstance(x, dict):
        return {k: _fmt(v) for k, v in x.items()}
    return x


# instances -------------------------------------------------------------------


def _parse_lambda(text):
    if text is None:
        raise UsageError("--delta needs --lambda")
    try:
        return PieceWeight.from_json(text)
    except (ValueError, words.WordError) as err:
        raise UsageError(f"bad --lambda: {err}") from err


def _delta(name):
    if name not in DECOMPOSITIONS:
        raise UsageError(f"unknown decomposition {name!r}; choose from {sorted(DECOMPOSITIONS)}")
    return DECOMPOSITIONS[name]()


def _load_complex(args):
    if getattr(args, "graph", None):
        try:
            data = json.loads(Path(args.graph).read_text())
            G, action = Graph.from_json(data)
            return MedianComplex(G, action)
        except (OSError, ValueError, KeyError) as err:
            raise UsageError(f"cannot load {args.graph}: {err}") from err
    spec = args.complex
    if spec.startswith("tree-F") or spec.startswith("tree:"):
        rank = int(spec.split("F")[-1] if spec.startswith("tree-F") else spec.split(":")[1])
        return TreeComplex(words.Alphabet(rank))
    try:
        return MedianComplex(complexes.build(spec))
    except (GraphError, ValueError) as err:
        raise UsageError(str(err)) from err


def _segment(cx, text):
    if isinstance(cx, TreeComplex):
        return cx.segment_from_word(words.parse_word(text, cx.alphabet))
    try:
        s = tuple(int(t) for t in text.split(","))
    except ValueError as err:
        raise UsageError("finite-complex segments are comma separated halfspace ids") from err
    if any(h not in cx.halfspace_ids for h in s) or not cx.is_segment(s):
        raise UsageError(f"{list(s)} is not a segment of {cx.name}")
    return s


def build_instance(args) -> dict:
    """W, its pair, and the vertex set the sweeps run over."""
    radius = args.radius
    if args.brooks:
        W, pair = brooks_weight(args.brooks)
        return {"label": f"brooks {args.brooks}", "W": W, "pair": pair, "vertices": words.F2.ball(radius),
                "free": True, "exact": True}
    if args.delta:
        delta = _delta(args.delta)
        lam = _parse_lambda(args.lam)
        W, pair = delta_weight(lam, delta)
        source = "declared"
        if delta.declared_R is None:
            scan = min(radius, 3)
            pair.family.R = verify_delta_axioms(delta, words.F2.ball(scan)).info["empirical_R"]
            source = f"empirical on B{scan}"
        exact = all(float(v).is_integer() for v in lam.values.values())
        return {"label": f"delta {args.delta}", "W": W, "pair": pair, "vertices": words.F2.ball(radius),
                "free": True, "exact": exact, "delta": delta, "lambda": lam,
                "R_source": source}
    if args.complex or getattr(args, "graph", None):
        cx = _load_complex(args)
        if not args.segment:
            raise UsageError("a complex instance needs --segment")
        s = _segment(cx, args.segment)
        W, pair = median_weight(cx, s)
        free = isinstance(cx, TreeComplex)
        verts = cx.alphabet.ball(radius) if free else cx.graph.vertices
        return {"label": f"median {cx.name} segment {args.segment}", "W": W, "pair": pair,
                "vertices": verts, "free": free, "exact": True, "complex": cx, "segment": s}
    raise UsageError("choose an instance: --brooks, --delta or --complex/--graph with --segment")


def parse_zeta(spec: str) -> Cochain:
    kind, _, arg = spec.partition(":")
    if kind == "zero":
        return zero(int(arg or 2))
    if kind == "one":
        return one()
    if kind == "dhat":
        return coboundary(hat(brooks_qm(arg))).memoized()
    if kind == "dexp":
        return coboundary(hat(exponent_sum(arg))).memoized()
    if kind == "table":
        try:
            return table_cochain(json.loads(Path(arg).read_text())).memoized()
        except (OSError, ValueError) as err:
            raise UsageError(f"cannot load table cochain {arg}: {err}") from err
    raise UsageError(f"unknown cochain {spec!r}; use zero:n, one, dhat:word, dexp:letter or table:file")


def zeta_norm(zeta: Cochain, vertices) -> tuple:
    """Exhaustive sup over the vertex set when affordable, else None."""
    vs = list(vertices)
    if len(vs) ** (zeta.degree + 1) <= EXHAUSTIVE_LIMIT:
        return max(abs(zeta(*t)) for t in itertools.product(vs, repeat=zeta.degree + 1)), "exhaustive"
    return None, "sampled"


# commands --------------------------------------------------------------------


def cmd_defect(args) -> dict:
    inst = build_instance(args)
    f = weight_qm(inst["W"], inst["pair"])
    value, witness = defect_on(f, inst["vertices"])
    bound = f.defect_bound
    out = {"command": "defect", "instance": inst["label"], "radius": args.radius,
           "vertices": len(inst["vertices"]), "triples": len(inst["vertices"]) ** 3,
           "defect": value, "witness": _fmt(witness), "bound": bound,
           "R": inst["pair"].R, "c": inst["W"].c, "norm_W": inst["W"].norm,
           "bound_formula": "3(R+1)*c*|W|", "status": "PASS" if value <= bound else "FAIL"}
    if "lambda" in inst:
        out["R_source"] = inst["R_source"]
        phi, _ = delta_qm(inst["lambda"], inst["delta"])
        agree = all(phi(g) == f("", g) for g in inst["vertices"])
        out["phi_agrees_with_f_e"] = agree
        out["status"] = "PASS" if out["status"] == "PASS" and agree else "FAIL"
    return out


def _stability_samples(zeta, inst, tuples):
    n = zeta.degree
    return [(t[0], t[1], t[2:2 + n]) for t in tuples[:200]]


def _preflight(zetas, inst, tuples):
    for z in zetas:
        ok, witness = phi_stability_check(z, inst["pair"], inst["W"], _stability_samples(z, inst, tuples))
        if not ok:
            raise PreconditionError(f"{z.name} is not Phi-stable", witness)


def _tol(args, inst):
    if args.tolerance is not None:
        return args.tolerance
    return 0 if inst["exact"] else 1e-9


def cmd_cup(args) -> dict:
    inst = build_instance(args)
    zeta = parse_zeta(args.zeta)
    n = zeta.degree
    tuples = random_tuples(inst["vertices"], n + 3, args.samples, args.seed)
    _preflight([zeta], inst, tuples)
    znorm, method = zeta_norm(zeta, inst["vertices"])
    certs = []
    sides = ("left", "right") if args.side == "both" else (args.side,)
    for side in sides:
        fn = cup_primitive_left if side == "left" else cup_primitive_right
        c = fn(inst["W"], inst["pair"], zeta, tuples, zeta_norm=znorm, seed=args.seed, tol=_tol(args, inst))
        d = c.to_dict()
        d.pop("witness", None)
        if c.witness is not None:
            d["witness"] = _fmt(c.witness)
        certs.append(d)
    ok = all(d["status"] == "PASS" for d in certs)
    return {"command": "cup", "instance": inst["label"], "zeta": args.zeta, "radius": args.radius,
            "zeta_norm_method": method, "certificates": certs, "status": "PASS" if ok else "FAIL"}


def cmd_massey(args) -> dict:
    inst = build_instance(args)
    z1, z2 = parse_zeta(args.zeta1), parse_zeta(args.zeta2)
    if z1.degree == 0 or z2.degree == 0:
        raise UsageError("Massey witnesses need cochains of positive degree")
    tuples = random_tuples(inst["vertices"], z1.degree + z2.degree + 2, args.samples, args.seed)
    _preflight([z1, z2], inst, tuples)
    (n1, m1), (n2, m2) = zeta_norm(z1, inst["vertices"]), zeta_norm(z2, inst["vertices"])
    norms = (n1, n2) if n1 is not None and n2 is not None else None
    c = massey_witness(inst["W"], inst["pair"], z1, z2, tuples, zeta_norms=norms, seed=args.seed,
                       tol=_tol(args, inst))
    d = c.to_dict()
    if c.witness is not None:
        d["witness"] = _fmt(c.witness)
    return {"command": "massey", "instance": inst["label"], "zeta1": args.zeta1, "zeta2": args.zeta2,
            "radius": args.radius, "zeta_norm_method": m1 if m1 == m2 else "mixed",
            "certificate": d, "status": d["status"]}


def cmd_median(args) -> dict:
    cx = _load_complex(args)
    out = {"command": "median", "complex": cx.name}
    ok = True
    if isinstance(cx, MedianComplex):
        out["vertices"] = len(cx.graph.vertices)
        out["hyperplanes"] = len(cx.hyperplanes)
        out["halfspaces"] = len(cx.masks)
        if args.staircase:
            rep = cx.staircase_length(args.cap)
            out["staircase"] = rep.to_dict(cx)
    elif args.staircase:
        # free-group trees have no transverse halfspaces
        out["staircase"] = {"length": 1, "cap": args.cap, "capped": False, "reason": "tree"}
    if args.segment:
        s = _segment(cx, args.segment)
        fs = median_qm(cx, s)
        W, pair = median_weight(cx, s)
        fw = weight_qm(W, pair)
        seg = {"segment": _fmt(list(s)), "length": len(s), "c": W.c, "zero_orbit": cx.segment_sign(s).zero}
        if isinstance(cx, TreeComplex):
            ball = cx.alphabet.ball(args.radius)
            if args.agree_brooks:
                omega = words.parse_word(args.segment, cx.alphabet)
                phi = brooks_qm(omega)
                bad = [g for g in ball if fs("", g) != phi(g)]
                seg["agree_brooks"] = {"radius": args.radius, "words": len(ball),
                                       "status": "PASS" if not bad else "FAIL",
                                       **({"counterexample": _fmt(bad[0])} if bad else {})}
                ok &= not bad
            small = cx.alphabet.ball(min(args.radius, 2))
            bad = [(x, y) for x in small for y in small if fs(x, y) != fw(x, y)]
        else:
            vs = cx.graph.vertices
            bad = [(x, y) for x in vs for y in vs if fs(x, y) != fw(x, y)]
            value, witness = defect_on(fs, vs)
            seg["defect"] = value
            seg["defect_bound"] = fw.defect_bound
            seg["bound_formula"] = "3(R+1)*c*|W| with R=1"
            ok &= value <= fw.defect_bound
        seg["weight_agreement"] = "PASS" if not bad else "FAIL"
        if bad:
            seg["counterexample"] = _fmt(list(bad[0]))
        ok &= not bad
        out["segment"] = seg
    out["status"] = "PASS" if ok else "FAIL"
    return out


def _pairs(inst):
    vs = list(inst["vertices"])
    return [(x, y) for x in vs for y in vs]


def cmd_verify_weight(args) -> dict:
    inst = build_instance(args)
    rep = verify_weight(inst["W"], inst["pair"], inst["pair"].action, _pairs(inst))
    return {"command": "verify-weight", "instance": inst["label"], "radius": args.radius,
            "report": _fmt(rep.to_dict()), "status": "PASS" if rep.passed else "FAIL"}


def cmd_verify_coherence(args) -> dict:
    if (args.complex or args.graph) and not args.segment:
        if args.graph:
            cx = _load_complex(args)
            G = cx.graph
        else:
            try:
                G = complexes.build(args.complex)
            except (GraphError, ValueError) as err:
                raise UsageError(str(err)) from err
        fam = geodesic_family(G)
        pair = CoherentPair(fam, FragmentCorrespondence(args.ell), args.ell)
        vs = G.vertices
        label = f"geodesics {G.name}"
    else:
        inst = build_instance(args)
        pair, vs, label = inst["pair"], inst["vertices"], inst["label"]
    R = args.R if args.R is not None else pair.R
    coh = verify_coherence(pair, [(x, y) for x in vs for y in vs])
    trip_vs = vs if len(vs) ** 3 <= EXHAUSTIVE_LIMIT else words.F2.ball(2)
    ok_q, qmp = verify_qmp(pair, R, itertools.product(trip_vs, repeat=3))
    passed = coh.passed and ok_q
    return {"command": "verify-coherence", "instance": label, "R": R,
            "coherence": _fmt(coh.to_dict()), "qmp": _fmt(qmp.to_dict()),
            "status": "PASS" if passed else "FAIL"}


def cmd_verify_delta(args) -> dict:
    delta = _delta(args.delta)
    rep = verify_delta_axioms(delta, words.F2.ball(args.radius))
    out = {"command": "verify-delta", "decomposition": delta.name, "radius": args.radius,
           "report": rep.to_dict(), "status": "PASS" if rep.passed else "FAIL"}
    if delta.candidate:
        out["label"] = "candidate"
    return out


# argument parsing ------------------------------------------------------------


def _instance_flags(p):
    g = p.add_argument_group("instance")
    g.add_argument("--brooks", metavar="WORD", help="Brooks counting quasimorphism of WORD")
    g.add_argument("--delta", metavar="NAME", help="Delta-decomposition: letters, syllables, broken")
    g.add_argument("--lambda", dest="lam", metavar="JSON", help='piece weights, e.g. \'{"a": 1}\'')
    g.add_argument("--complex", metavar="SPEC", help="grid:3x3, staircase:2, tree-F2, ...")
    g.add_argument("--graph", metavar="FILE", help="JSON graph with optional generator permutations")
    g.add_argument("--segment", metavar="S", help="word (trees) or comma separated halfspace ids")


def _common(p, radius=3):
    p.add_argument("--radius", type=int, default=radius)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--tolerance", type=float, default=None)
    p.add_argument("--out", metavar="FILE", help="also write the JSON report here")
    p.add_argument("--table", action="store_true", help="print a plain-text table instead of JSON")


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="weightqm", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("defect", help="exhaustive defect of f_W over a ball or complex")
    _instance_flags(p)
    _common(p)
    p.set_defaults(func=cmd_defect)

    p = sub.add_parser("cup", help="certificate for the cup-product primitives")
    _instance_flags(p)
    _common(p)
    p.add_argument("--zeta", default="dhat:aab")
    p.add_argument("--side", choices=("left", "right", "both"), default="both")
    p.set_defaults(func=cmd_cup)

    p = sub.add_parser("massey", help="certificate for the Massey product witness")
    _instance_flags(p)
    _common(p)
    p.add_argument("--zeta1", default="dhat:aab")
    p.add_argument("--zeta2", default="dhat:bba")
    p.set_defaults(func=cmd_massey)

    p = sub.add_parser("median", help="halfspaces, staircases and median quasimorphisms")
    p.add_argument("--complex", default="grid:3x3")
    p.add_argument("--graph", metavar="FILE")
    p.add_argument("--segment")
    p.add_argument("--staircase", action="store_true")
    p.add_argument("--agree-brooks", action="store_true")
    p.add_argument("--cap", type=int, default=8)
    _common(p, radius=5)
    p.set_defaults(func=cmd_median)

    p = sub.add_parser("verify-weight", help="the five weight properties on all pairs")
    _instance_flags(p)
    _common(p, radius=3)
    p.set_defaults(func=cmd_verify_weight)

    p = sub.add_parser("verify-coherence", help="coherence conditions and the quasi-median property")
    _instance_flags(p)
    _common(p, radius=2)
    p.add_argument("--ell", type=int, default=1)
    p.add_argument("--R", type=int, default=None)
    p.set_defaults(func=cmd_verify_coherence)

    p = sub.add_parser("verify-delta", help="Delta-decomposition axioms on a ball")
    p.add_argument("--delta", required=True)
    _common(p, radius=4)
    p.set_defaults(func=cmd_verify_delta)
    return parser


def _table(result: dict) -> str:
    lines = [f"{result['command']}: {result['status']}"]
    for k in sorted(result):
        if k in ("command", "status"):
            continue
        v = result[k]
        lines.append(f"  {k:<22} {v if not isinstance(v, (dict, list)) else json.dumps(_brief(v))}")
    return "\n".join(lines)


def _brief(v):
    if isinstance(v, dict):
        return {k: _brief(x) for k, x in v.items() if k in ("status", "length", "defect", "bound", "max_residual",
                                                            "sampled_norm", "condition", "checks")}
    if isinstance(v, list):
        return [_brief(x) for x in v]
    return v


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        result = args.func(args)
    except UsageError as err:
        parser.error(str(err))
    except PreconditionError as err:
        result = {"command": args.command, "status": "FAIL", "error": str(err),
                  "witness": _fmt(err.witness)}
    except (words.ResourceError, words.WordError, GraphError) as err:
        print(f"weightqm: {err}", file=sys.stderr)
        return 2
    result.setdefault("seed", args.seed)
    text = dumps(result)
    if args.out:
        Path(args.out).write_text(text + "\n")
    print(_table(result) if args.table else text)
    return 0 if result.get("status") == "PASS" else 1


if __name__ == "__main__":
    sys.exit(main())
