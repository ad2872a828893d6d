"""Command-line front end.

Thin adapters over the library: each subcommand loads files in the text
formats of the poset/algebra/morphism modules, calls one operation, and
prints either human-readable lines or (with --json) a report whose fields
mirror the operation's result.  Exit codes: 0 success, 1 domain error,
2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import axioms as ax
from . import minext
from .amalgam import coamalgamate
from .cbs import (
    FinCbs,
    algebra_from_text,
    algebra_tables_from_text,
    algebra_to_text,
    validate_cbs,
)
from .duality import cbs_to_poset, poset_to_cbs
from .errors import FincbsError
from .pmorph import classify, decompose_minimal_chain, pmorphism_to_text, read_pmorphism
from .poset import DEFAULT_DOWNSET_CAP, Poset, poset_from_text, poset_to_text
from .terms import (
    format_term,
    format_term_brouwerian,
    free_cbs,
    parse_term,
    parse_term_brouwerian,
    terms_equal,
)

SCHEMA = "v1"


def _emit_json(payload: dict, out) -> None:
    payload = {"schema": SCHEMA, **payload}
    print(json.dumps(payload, sort_keys=True, indent=2), file=out)


def _write_output(text: str, path: str | None, out) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        out.write(text)


def _read_file(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_object(path: str):
    """Poset or algebra, keyed on the file header."""
    text = _read_file(path)
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        word = line.split()[0]
        if word == "poset":
            return poset_from_text(text)
        if word in ("cbs", "bs"):
            return algebra_from_text(text)
        break
    raise FincbsError(f"{path}: unrecognized file header")


def render_hasse(obj) -> str:
    """DOT digraph of the cover relation, edges pointing bottom to top."""
    if isinstance(obj, FinCbs):
        P, _ = cbs_to_poset(obj)
        n = obj.n
        label = obj.label
        covers = [
            (a, b)
            for a in range(n)
            for b in range(n)
            if obj.lt(a, b)
            and not any(obj.lt(a, c) and obj.lt(c, b) for c in range(n))
        ]
    else:
        n = obj.n
        label = obj.label
        covers = obj.covers()
    lines = ["digraph hasse {", "  rankdir=BT;"]
    for i in range(n):
        lines.append(f'  n{i} [label="{label(i)}"];')
    for a, b in covers:
        lines.append(f"  n{a} -> n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# --- subcommand handlers ------------------------------------------------------


def _cmd_check(args) -> int:
    text = _read_file(args.file)
    join, diff = algebra_tables_from_text(text)
    problems = validate_cbs(join, diff)
    if problems:
        if args.json:
            _emit_json(
                {
                    "command": "check",
                    "valid": False,
                    "violations": [
                        {"law": v.law, "witness": list(v.witness)} for v in problems
                    ],
                },
                sys.stdout,
            )
        else:
            print(f"{args.file}: not a co-Brouwerian semilattice")
            for v in problems:
                print(f"  {v}")
        return 1
    L = FinCbs(join, diff)
    reports = ax.evaluate_axioms(L)
    if args.json:
        _emit_json(
            {
                "command": "check",
                "valid": True,
                "size": L.n,
                "axioms": {
                    name: {
                        "satisfied": r.satisfied,
                        "failures": [list(f) for f in r.failures],
                    }
                    for name, r in reports.items()
                },
            },
            sys.stdout,
        )
    else:
        print(f"{args.file}: valid co-Brouwerian semilattice with {L.n} elements")
        for name, r in reports.items():
            if r.satisfied:
                print(f"  {name}: satisfied")
            else:
                print(f"  {name}: fails at {len(r.failures)} instance(s), first {r.failures[0]}")
    return 0


def _cmd_dualize(args) -> int:
    obj = _load_object(args.file)
    if isinstance(obj, Poset):
        algebra, _ = poset_to_cbs(obj, max_count=args.max_downsets)
        text = algebra_to_text(algebra, orientation=args.orientation)
        summary = {"command": "dualize", "input": "poset", "output_size": algebra.n}
    else:
        P, _ = cbs_to_poset(obj)
        text = poset_to_text(P)
        summary = {"command": "dualize", "input": "cbs", "output_size": P.n}
    if args.json:
        _emit_json({**summary, "text": text}, sys.stdout)
    else:
        _write_output(text, args.out, sys.stdout)
    return 0


def _cmd_signatures(args) -> int:
    L = algebra_from_text(_read_file(args.file))
    sigs = minext.enumerate_signatures(L)
    if args.json:
        _emit_json(
            {
                "command": "signatures",
                "count": len(sigs),
                "signatures": [minext.format_signature(s) for s in sigs],
            },
            sys.stdout,
        )
    else:
        for s in sigs:
            print(minext.format_signature(s))
    return 0


def _cmd_extend(args) -> int:
    L = algebra_from_text(_read_file(args.file))
    sig = minext.parse_signature(args.signature)
    e = minext.build_extension(L, sig)
    text = algebra_to_text(e.ext, orientation=args.orientation)
    if args.json:
        _emit_json(
            {
                "command": "extend",
                "kind": e.kind,
                "new_elements": list(e.new_elements),
                "embedding": list(e.embed.map),
                "algebra": text,
            },
            sys.stdout,
        )
    else:
        print(f"# kind: {e.kind}")
        print(f"# new elements: {' '.join(str(x) for x in e.new_elements)}")
        print(f"# embedding: {' '.join(str(v) for v in e.embed.map)}")
        _write_output(text, args.out, sys.stdout)
    return 0


def _cmd_decompose(args) -> int:
    f = read_pmorphism(args.file)
    factors = decompose_minimal_chain(f)
    def one(g):
        cls = classify(g)
        return {
            "kind": cls.kind,
            "dom_size": g.dom.n,
            "cod_size": g.cod.n,
            "map": [v if v is not None else None for v in g.map],
        }

    if args.json:
        _emit_json(
            {"command": "decompose", "length": len(factors), "factors": [one(g) for g in factors]},
            sys.stdout,
        )
    else:
        print(f"{len(factors)} minimal factor(s)")
        for i, g in enumerate(factors):
            cls = classify(g)
            pairs = " ".join(f"{p}->{v}" for p, v in enumerate(g.map) if v is not None)
            print(f"  factor {i}: {cls.kind} kind, {g.dom.n} -> {g.cod.n} points, {pairs}")
    return 0


def _cmd_amalgamate(args) -> int:
    f = read_pmorphism(args.f)
    g = read_pmorphism(args.g)
    S, fprime, gprime = coamalgamate(f, g)
    s_text = poset_to_text(S)
    if args.json:
        _emit_json(
            {
                "command": "amalgamate",
                "s_size": S.n,
                "s_labels": [S.label(i) for i in range(S.n)],
                "s_poset": s_text,
                "f_prime": [v if v is not None else None for v in fprime.map],
                "g_prime": [v if v is not None else None for v in gprime.map],
            },
            sys.stdout,
        )
        return 0
    if args.out:
        # emit the amalgam, both projection maps, and the posets the maps
        # reference so every morphism file is self-contained
        base = args.out.rsplit("/", 1)[-1]
        _write_output(s_text, f"{args.out}_s.poset", sys.stdout)
        _write_output(poset_to_text(g.dom), f"{args.out}_r.poset", sys.stdout)
        _write_output(poset_to_text(f.dom), f"{args.out}_p.poset", sys.stdout)
        _write_output(
            pmorphism_to_text(fprime, f"{base}_s.poset", f"{base}_r.poset"),
            f"{args.out}_fprime.pmorph",
            sys.stdout,
        )
        _write_output(
            pmorphism_to_text(gprime, f"{base}_s.poset", f"{base}_p.poset"),
            f"{args.out}_gprime.pmorph",
            sys.stdout,
        )
        print(f"wrote {args.out}_s.poset, {args.out}_fprime.pmorph, {args.out}_gprime.pmorph")
    else:
        print(f"# amalgam with {S.n} points")
        sys.stdout.write(s_text)
        print("# f' (to the second domain):", " ".join(
            f"{i}->{v}" for i, v in enumerate(fprime.map) if v is not None))
        print("# g' (to the first domain):", " ".join(
            f"{i}->{v}" for i, v in enumerate(gprime.map) if v is not None))
    return 0


def _cmd_witness(args) -> int:
    L = algebra_from_text(_read_file(args.file))
    if args.axiom == "splitting":
        record, a1, a2 = ax.splitting_witness(L, args.elements[0], args.elements[1], args.elements[2])
        cert = ax.splitting_conclusions(
            record.ext,
            record.embed.map[args.elements[0]],
            record.embed.map[args.elements[1]],
            record.embed.map[args.elements[2]],
            a1,
            a2,
        )
        witnesses = {"a1": a1, "a2": a2}
    elif args.axiom == "density1":
        record, b = ax.density1_witness(L, args.elements[0])
        cert = ax.density1_conclusions(record.ext, record.embed.map[args.elements[0]], b)
        witnesses = {"b": b}
    else:
        c, a1, a2, d = args.elements
        record, b = ax.density2_witness(L, c, a1, a2, d)
        emb = record.embed.map
        cert = ax.density2_conclusions(record.ext, emb[c], emb[a1], emb[a2], emb[d], b)
        witnesses = {"b": b}
    text = algebra_to_text(record.ext, orientation=args.orientation)
    payload = {
        "command": "witness",
        "axiom": args.axiom,
        "witnesses": witnesses,
        "embedding": list(record.embed.map),
        "certificate": cert,
        "algebra": text,
    }
    if args.json:
        _emit_json(payload, sys.stdout)
    else:
        print(f"# axiom: {args.axiom}")
        print(f"# witnesses: {witnesses}")
        print(f"# embedding: {' '.join(str(v) for v in record.embed.map)}")
        for entry in cert:
            print(f"# {entry['equation']}: {'ok' if entry['holds'] else 'FAILED'}")
        _write_output(text, args.out, sys.stdout)
    return 0


def _cmd_realize(args) -> int:
    L = algebra_from_text(_read_file(args.file))
    sig = minext.parse_signature(args.signature)
    steps, gens = ax.realize_signature_via_axioms(L, sig)
    top = steps[-1].ext if steps else L
    gens_list = [gens] if isinstance(gens, int) else list(gens)
    text = algebra_to_text(top, orientation=args.orientation)
    tower = [
        {"rule": s.rule, "from_size": s.base.n, "to_size": s.ext.n, "added": list(s.new_elements)}
        for s in steps
    ]
    checks = [
        {"equation": "generators induce the requested signature", "holds": True}
    ]
    if args.json:
        _emit_json(
            {
                "command": "realize",
                "signature": minext.format_signature(sig),
                "tower": tower,
                "generators": gens_list,
                "certificate": checks,
                "algebra": text,
            },
            sys.stdout,
        )
    else:
        print(f"# signature: {minext.format_signature(sig)}")
        for i, s in enumerate(tower):
            print(f"# step {i}: {s['rule']} ({s['from_size']} -> {s['to_size']} elements)")
        print(f"# generators: {' '.join(str(x) for x in gens_list)}")
        _write_output(text, args.out, sys.stdout)
    return 0


def _cmd_free(args) -> int:
    algebra, gens = free_cbs(args.n)
    if args.json:
        _emit_json(
            {"command": "free", "arity": args.n, "size": algebra.n, "generators": list(gens)},
            sys.stdout,
        )
    else:
        print(f"free algebra on {args.n} generator(s): {algebra.n} elements")
    if args.out:
        _write_output(algebra_to_text(algebra, orientation=args.orientation), args.out, sys.stdout)
    return 0


def _cmd_eq(args) -> int:
    parse = parse_term_brouwerian if args.orientation == "brouwerian" else parse_term
    fmt = format_term_brouwerian if args.orientation == "brouwerian" else format_term
    s = parse(args.left)
    t = parse(args.right)
    res = terms_equal(s, t, arity=args.arity)
    if args.json:
        payload = {
            "command": "eq",
            "equal": res.equal,
            "left": fmt(s),
            "right": fmt(t),
        }
        if res.countermodel:
            cm = res.countermodel
            payload["countermodel"] = {
                "algebra": cm.algebra_name,
                "assignment": list(cm.assignment),
                "left_value": cm.left_value,
                "right_value": cm.right_value,
            }
        _emit_json(payload, sys.stdout)
    else:
        print("equal" if res.equal else "not equal")
        if res.countermodel:
            cm = res.countermodel
            env = ", ".join(f"x{i}={v}" for i, v in enumerate(cm.assignment))
            print(
                f"countermodel in {cm.algebra_name}: {env} gives "
                f"{cm.left_value} vs {cm.right_value}"
            )
    return 0


def _cmd_dot(args) -> int:
    obj = _load_object(args.file)
    _write_output(render_hasse(obj), args.out, sys.stdout)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fincbs",
        description="finite co-Brouwerian semilattices: duality, extensions, axioms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, out=True):
        p.add_argument("--json", action="store_true", help="machine-readable report")
        p.add_argument(
            "--orientation",
            choices=("cbs", "brouwerian"),
            default="cbs",
            help="orientation for emitted algebras and parsed terms",
        )
        if out:
            p.add_argument("--out", help="write the primary output to this file")

    p = sub.add_parser("check", help="validate an algebra file and evaluate the axioms")
    p.add_argument("file")
    common(p, out=False)
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("dualize", help="poset file to algebra, or algebra file to poset")
    p.add_argument("file")
    p.add_argument("--max-downsets", type=int, default=DEFAULT_DOWNSET_CAP)
    common(p)
    p.set_defaults(func=_cmd_dualize)

    p = sub.add_parser("signatures", help="list the signatures of an algebra")
    p.add_argument("file")
    common(p, out=False)
    p.set_defaults(func=_cmd_signatures)

    p = sub.add_parser("extend", help="build the minimal extension of a signature")
    p.add_argument("file")
    p.add_argument("signature", help="e.g. 'first h={0} G={1}' or 'second h1={0} h2={0} g={1}'")
    common(p)
    p.set_defaults(func=_cmd_extend)

    p = sub.add_parser("decompose", help="factor a surjective P-morphism into minimal ones")
    p.add_argument("file", help="morphism file (pmorph format)")
    common(p, out=False)
    p.set_defaults(func=_cmd_decompose)

    p = sub.add_parser("amalgamate", help="coamalgamate two surjective P-morphisms")
    p.add_argument("f")
    p.add_argument("g")
    common(p)
    p.set_defaults(func=_cmd_amalgamate)

    p = sub.add_parser("witness", help="build an axiom witness extension")
    p.add_argument("axiom", choices=("splitting", "density1", "density2"))
    p.add_argument("file")
    p.add_argument("elements", type=int, nargs="+", help="axiom instance elements")
    common(p)
    p.set_defaults(func=_cmd_witness)

    p = sub.add_parser("realize", help="realize a signature via axiom witnesses")
    p.add_argument("file")
    p.add_argument("signature")
    common(p)
    p.set_defaults(func=_cmd_realize)

    p = sub.add_parser("free", help="build a free algebra")
    p.add_argument("n", type=int)
    common(p)
    p.set_defaults(func=_cmd_free)

    p = sub.add_parser("eq", help="decide term equality in all CBSes")
    p.add_argument("left")
    p.add_argument("right")
    p.add_argument("--arity", type=int, default=None)
    common(p, out=False)
    p.set_defaults(func=_cmd_eq)

    p = sub.add_parser("dot", help="render a poset or algebra as a DOT Hasse diagram")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=_cmd_dot)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    n_args = {
        "splitting": 3,
        "density1": 1,
        "density2": 4,
    }
    if args.command == "witness" and len(args.elements) != n_args[args.axiom]:
        parser.error(
            f"witness {args.axiom} takes {n_args[args.axiom]} element argument(s)"
        )
    try:
        return args.func(args)
    except FincbsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
