"""Command-line entry point: extend, verify, and catalog.

Exit codes: 0 all requested checks passed, 1 a check failed, 2 input or
configuration error.  ``ABAP_FORGE_LOG`` selects the log level.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys

from . import jsonio
from .catalog import catalog, catalog_upto
from .extend import extend, window_structure
from .lifts import (fixed_points, identity, lift_automorphism, Morphism,
                    preserves_relations)
from .oracle import comparator_agreement
from .qftypes import enumerate_types
from .structures import (FiniteStructure, FiniteWindow, automorphisms,
                         isomorphic, validate_class)
from .tags import ConfigError, parse_tag
from .terms import Wit, term_id
from .tower import verify_backward, verify_forward

log = logging.getLogger("abap_forge")

OK, CHECK_FAILED, INPUT_ERROR = 0, 1, 2


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("ABAP_FORGE_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return INPUT_ERROR


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="abap-forge",
                                description=__doc__.splitlines()[0])
    sub = p.add_subparsers(required=True)

    ext = sub.add_parser("extend", help="build a window of the extension E(A)")
    ext.add_argument("input", help="structure JSON file, or - for stdin")
    ext.add_argument("--class", dest="klass", default=None,
                     help="expected class tag (cross-checked against the input)")
    ext.add_argument("--depth", type=int, default=1)
    ext.add_argument("--window", type=int, default=0, help="chain window w")
    ext.add_argument("--params", type=int, default=2, help="parameter bound p")
    ext.add_argument("--format", choices=("json", "dot", "summary"), default="json")
    ext.add_argument("-o", "--output", default=None)
    ext.set_defaults(func=cmd_extend)

    ver = sub.add_parser("verify", help="run witness/lift/oracle checks")
    ver.add_argument("inputs", nargs="+", help="structure JSON files")
    ver.add_argument("--abap", action="store_true",
                     help="check witness completeness, lifting, and oracle "
                          "agreement on each input")
    ver.add_argument("--reduce", action="store_true",
                     help="treat the two inputs as a pair and verify the "
                          "conjugacy reduction on them")
    ver.add_argument("--depth", type=int, default=1)
    ver.add_argument("--window", type=int, default=0)
    ver.add_argument("--params", type=int, default=2)
    ver.add_argument("--seed", type=int, default=0)
    ver.set_defaults(func=cmd_verify)

    cat = sub.add_parser("catalog", help="enumerate small structures up to iso")
    cat.add_argument("--class", dest="klass", required=True)
    cat.add_argument("--max-size", type=int, required=True)
    cat.add_argument("--exact", action="store_true",
                     help="only the exact size instead of 1..max-size")
    cat.add_argument("--format", choices=("json", "summary"), default="summary")
    cat.set_defaults(func=cmd_catalog)
    return p


def _read_structure(path: str) -> FiniteStructure:
    text = sys.stdin.read() if path == "-" else open(path).read()
    return jsonio.loads(text)


def _emit(text: str, output: str | None):
    if output:
        with open(output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_extend(args) -> int:
    S = _read_structure(args.input)
    if args.klass is not None and parse_tag(args.klass) != S.tag:
        raise ConfigError(f"--class {args.klass} does not match input tag {S.tag}")
    rpt = validate_class(S)
    if not rpt.passed:
        print(rpt.summary(), file=sys.stderr)
        return INPUT_ERROR
    window = FiniteWindow(d=args.depth, w=args.window, p=args.params)
    base = S
    for _ in range(max(args.depth, 1)):
        ext = extend(base, window)
        base = window_structure(ext)
    F = base
    if args.format == "json":
        _emit(jsonio.dumps(F), args.output)
    elif args.format == "dot":
        _emit(jsonio.dot_export(F), args.output)
    else:
        _emit(jsonio.summary(F), args.output)
    return OK


def cmd_verify(args) -> int:
    if args.reduce:
        return _verify_reduce(args)
    if not args.abap:
        raise ConfigError("choose --abap or --reduce")
    window = FiniteWindow(d=args.depth, w=args.window, p=args.params)
    failures = 0
    for path in args.inputs:
        S = _read_structure(path)
        rpt = validate_class(S)
        if not rpt.passed:
            print(rpt.summary(), file=sys.stderr)
            return INPUT_ERROR
        failures += _abap_battery(path, S, window)
    return CHECK_FAILED if failures else OK


def _abap_battery(label: str, S: FiniteStructure, window: FiniteWindow) -> int:
    failures = 0

    def report(name: str, ok: bool, detail: str = ""):
        nonlocal failures
        failures += not ok
        tail = f"  {detail}" if detail and not ok else ""
        print(f"[{'pass' if ok else 'FAIL'}] {label}: {name}{tail}")

    ext = extend(S, window)
    F = window_structure(ext)
    report("window-validates", validate_class(F).passed)

    types = ext.types
    realized = 0
    for tau in types:
        wit = Wit(ext.stage, tau, 0)
        realized += all(_realizes(ext, wit, k, p) for k, p in tau.lits)
    report("witness-completeness",
           realized == len(types), f"{realized}/{len(types)} chains realize their type")

    agree, mism = comparator_agreement(ext)
    report("oracle-agreement", agree,
           "; ".join(f"{sym} differs at ({term_id(s)},{term_id(t)})"
                     for sym, s, t, _ in mism))

    for i, phi_map in enumerate(automorphisms(S)):
        phi = Morphism.from_dict(S, S, phi_map, f"aut{i}")
        lifted = lift_automorphism(phi, ext)
        terms = ext.window_terms()
        fixed_wits = [t for t in fixed_points(lifted, terms) if isinstance(t, Wit)]
        report(f"lift(aut{i})-fixed-point-free", not fixed_wits)
        report(f"lift(aut{i})-preserves-relations",
               preserves_relations(lifted, ext, terms))
    return failures


def _realizes(ext, wit, kind, param) -> bool:
    from .qftypes import K_ADJ, K_ARG, K_ARL, K_GT, K_LT, K_PGT, K_PLT
    from .tags import ADJ, ARROW, LT, TRI
    table = {K_LT: (LT, True), K_GT: (LT, False), K_PLT: (TRI, True),
             K_PGT: (TRI, False), K_ARL: (ARROW, True), K_ARG: (ARROW, False),
             K_ADJ: (ADJ, True)}
    sym, lower = table[kind]
    if sym == ADJ:
        return ext.rel(ADJ, wit, param)
    return ext.rel(sym, param, wit) if lower else ext.rel(sym, wit, param)


def _verify_reduce(args) -> int:
    if len(args.inputs) != 2:
        raise ConfigError("--reduce wants exactly two input files")
    A0, A1 = (_read_structure(p) for p in args.inputs)
    for S in (A0, A1):
        rpt = validate_class(S)
        if not rpt.passed:
            print(rpt.summary(), file=sys.stderr)
            return INPUT_ERROR
    if A0.tag != A1.tag:
        raise ConfigError(f"inputs belong to different classes: {A0.tag} vs {A1.tag}")
    window = FiniteWindow(d=args.depth, w=args.window, p=args.params)
    iso = isomorphic(A0, A1)
    ok = True
    if iso is not None:
        fwd = verify_forward(A0, A1, iso, args.depth, window)
        print(f"[{'pass' if fwd else 'FAIL'}] isomorphic pair: lifted maps conjugate")
        ok &= fwd
    bwd = verify_backward(A0, A1, args.depth, window)
    kind = "isomorphic" if iso is not None else "non-isomorphic"
    print(f"[{'pass' if bwd else 'FAIL'}] {kind} pair: fixed sets "
          f"{'match' if iso is not None else 'distinguish them'}")
    ok &= bwd
    return OK if ok else CHECK_FAILED


def cmd_catalog(args) -> int:
    tag = parse_tag(args.klass)
    if args.max_size > 6:
        raise ConfigError("catalog sizes are capped at 6")
    items = (catalog(tag, args.max_size) if args.exact
             else catalog_upto(tag, args.max_size))
    if args.format == "json":
        import json as _json
        print(_json.dumps([jsonio.structure_to_json(S) for S in items], indent=2))
    else:
        for i, S in enumerate(items):
            print(f"{i:3d}  {jsonio.summary(S)}")
        print(f"total: {len(items)}")
    return OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
