"""Command-line front end.

Exit codes: 0 pass, 1 check failure, 2 input error, 3 internal consistency error.
"""
from __future__ import annotations

import argparse
import random
import sys as _sys
from fractions import Fraction

from . import io, perversity as pv
from .bisheaf import ShapeMismatch, module_to_full_bisheaf, validate_full_bisheaf
from .coxeter import DEFAULT_CAP, CoxeterError
from .facets import enumerate_oppositions, facet_complex

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3


def _common(p: argparse.ArgumentParser, needs_type: bool = True) -> None:
    p.add_argument("--type", required=needs_type, help="preset (A1, A2, B2, A3, B3, I2(m), ...), inline JSON or JSON file")
    p.add_argument("--cap", type=int, default=DEFAULT_CAP, help="enumeration cap on |W|")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for relation checks")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", help="write output here instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="coxperv", description="Equivariant perverse sheaves on finite Coxeter arrangements")
    sub = ap.add_subparsers(dest="cmd", required=True)
    p = sub.add_parser("system", help="group order and enumeration counts")
    p.add_argument("system", nargs="?", help="preset or JSON file (alternative to --type)")
    _common(p, needs_type=False)
    for name, text in (("facets", "facets with sign vectors"), ("oppositions", "opposition data"),
                       ("relations", "gallery relation data")):
        _common(sub.add_parser(name, help=text))
    for name, text in (("check", "check a module for perversity"), ("oracle", "geometric oracles on a module"),
                       ("monodromy", "monodromy operators of a module")):
        p = sub.add_parser(name, help=text)
        p.add_argument("module", help="module JSON file")
        _common(p, needs_type=False)
        if name == "check":
            p.add_argument("--geometric-oracle", action="store_true", help="also run the geometric transitivity oracle")
    p = sub.add_parser("example", help="write an example module")
    p.add_argument("kind", choices=["trivial", "skyscraper", "rank-one", "local-system", "random"])
    p.add_argument("--mu", default="2", help="parameter of the rank-one module")
    p.add_argument("--rep", default="reflection", choices=["trivial", "sign", "reflection"],
                   help="representation for skyscraper / local-system")
    _common(p, needs_type=False)
    return ap


def _emit(obj, out) -> None:
    text = io.dumps(obj)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        _sys.stdout.write(text)


def _type_label(source):
    return source if io.system_name(source) is not None else io.resolve_matrix(source).to_json()


def _load_module(args):
    data = io.load_json(args.module)
    source = args.type if args.type else data.get("system")
    if source is None:
        raise io.InputError("module names no system; pass --type")
    if isinstance(source, dict):
        source = io.dumps(source)
    system = io.load_system(source, args.cap)
    return system, io.module_from_json(data, system=system.matrix)


def cmd_system(args) -> int:
    source = args.system or args.type
    if source is None:
        raise io.InputError("give a preset or JSON file")
    s = io.load_system(source, args.cap)
    fc = facet_complex(s)
    out = {
        "type": _type_label(source),
        "rank": s.rank,
        "order": s.order,
        "positive_roots": s.npos,
        "facets": len(fc),
        "opposition_data": len(fc.oppositions()),
        "relation5_data": len(pv.enumerate_relation5_data(s)),
    }
    _emit(out, args.out)
    return EXIT_PASS


def cmd_facets(args) -> int:
    s = io.load_system(args.type, args.cap)
    fc = facet_complex(s)
    geo = fc.geometry
    out = {
        "positive_roots": [[s.field.format(c) for c in r] for r in geo.positive_roots],
        "facets": [{**io.facet_json(s, f), "dim": fc.dim(f), "sign": geo.signs[f]} for f in fc.facets],
    }
    _emit(out, args.out)
    return EXIT_PASS


def cmd_oppositions(args) -> int:
    s = io.load_system(args.type, args.cap)
    _emit([pv.opposition_json(s, d) for d in enumerate_oppositions(s)], args.out)
    return EXIT_PASS


def cmd_relations(args) -> int:
    s = io.load_system(args.type, args.cap)
    data = pv.enumerate_relation5_data(s)
    _emit({"count": len(data), "distinct_IABw": len({(d.I, d.A, d.B, d.w) for d in data}),
           "data": [d.to_json(s) for d in data]}, args.out)
    return EXIT_PASS


def cmd_check(args) -> int:
    s, m = _load_module(args)
    rep = pv.check_perverse(s, m, jobs=args.jobs)
    out = {"perverse": rep.to_json(), "monodromy": pv.monodromy(s, m, check=False).to_json(m.field)}
    status = EXIT_PASS if rep.passed else EXIT_FAIL
    if args.geometric_oracle and rep.parts[0].passed:
        fb = module_to_full_bisheaf(s, m, validate=False)
        if not validate_full_bisheaf(s, fb).passed:
            return EXIT_INTERNAL
        orc = pv.transitivity_oracle_geometric(s, fb)
        agree = orc.passed == rep.parts[1].passed
        out["oracle"] = {**orc.to_json(), "agrees": agree}
        if not agree:
            _emit(out, args.out)
            return EXIT_INTERNAL
    _emit(out, args.out)
    return status


def cmd_oracle(args) -> int:
    s, m = _load_module(args)
    base = pv.validate_module(s, m)
    if not base.passed:
        _emit({"module": base.to_json()}, args.out)
        return EXIT_FAIL
    fb = module_to_full_bisheaf(s, m, validate=False)
    full = validate_full_bisheaf(s, fb)
    if not full.passed:
        _emit({"fullBisheaf": full.to_json()}, args.out)
        return EXIT_INTERNAL
    trans = pv.transitivity_oracle_geometric(s, fb)
    inv = pv.invertibility_oracle_geometric(s, fb)
    _emit({"transitive": trans.to_json(), "invertible": inv.to_json()}, args.out)
    return EXIT_PASS if trans.passed and inv.passed else EXIT_FAIL


def cmd_monodromy(args) -> int:
    s, m = _load_module(args)
    rep = pv.monodromy(s, m)
    _emit(rep.to_json(m.field), args.out)
    return EXIT_PASS if rep.braid == "pass" and rep.invertible == "pass" else EXIT_FAIL


def _representation(s, name):
    if name == "trivial":
        return pv.character(s, [1] * s.rank)
    if name == "sign":
        return pv.sign_character(s)
    return pv.reflection_representation(s)


def cmd_example(args) -> int:
    if args.kind == "rank-one":
        if args.type not in (None, "A1"):
            raise io.InputError("the rank-one module lives on A1")
        try:
            mu = Fraction(args.mu)
        except (ValueError, ZeroDivisionError) as exc:
            raise io.InputError(f"bad --mu: {exc}") from exc
        _emit(io.module_to_json(pv.make_rank_one_Z2(mu), "A1"), args.out)
        return EXIT_PASS
    if args.type is None:
        raise io.InputError("--type is required for this example")
    s = io.load_system(args.type, args.cap)
    if args.kind == "trivial":
        m = pv.trivial_module(s)
    elif args.kind == "skyscraper":
        m = pv.make_skyscraper(s, _representation(s, args.rep))
    elif args.kind == "local-system":
        m = pv.make_local_system_module(s, _representation(s, args.rep))
    else:
        m = pv.random_module(s, random.Random(args.seed))
    _emit(io.module_to_json(m, _type_label(args.type)), args.out)
    return EXIT_PASS


COMMANDS = {"system": cmd_system, "facets": cmd_facets, "oppositions": cmd_oppositions,
            "relations": cmd_relations, "check": cmd_check, "oracle": cmd_oracle,
            "monodromy": cmd_monodromy, "example": cmd_example}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.cmd](args)
    except (io.InputError, CoxeterError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT
    except ShapeMismatch as exc:
        print(f"shape mismatch: {exc}", file=_sys.stderr)
        return EXIT_INTERNAL
    except pv.EnumerationCapExceeded as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    _sys.exit(main())
