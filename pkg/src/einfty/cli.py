"""Command-line front end.

Reports are JSON with deterministic key order: identical input and flags
produce byte-identical output.  Every error path exits nonzero after
printing a machine-readable report naming the violated precondition.
"""
from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path

from . import __version__
from .chains import bracket_d, compose_slot, transpose_swap
from .cobar import build_cobar, check_d_squared_cobar, gr_h0_ranks
from .coalgebra import chain_structure, operator_dump, reduce_structure
from .errors import EinftyError
from .formats import (COALG_FIXTURES, SSET_FIXTURES, fixture_path,
                      list_fixtures, load_structure_fixture)
from .homology import build_sdr, homology, sdr_variant
from .intlinalg import IntMatrix
from .invariants import (InvariantClass, class_equals, massey_invariant,
                         sq_dual_invariant, window_from_package)
from .operads import check_d_squared
from .simplicial import parse_sset
from .transfer import transfer, verify_relations


def _resolve_input(arg: str) -> Path:
    p = Path(arg)
    if p.exists():
        return p
    if arg in SSET_FIXTURES or arg in COALG_FIXTURES:
        return fixture_path(arg)
    raise EinftyError(f"no such file or bundled fixture: {arg!r} "
                      f"(bundled: {', '.join(list_fixtures())})")


def _load_sset(path: Path):
    return parse_sset(path.read_text())


def _emit(report: dict, out: str | None) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _class_report(cls: InvariantClass) -> dict:
    free, torsion = cls.group.invariants()
    return {
        "group": {"free_rank": free, "torsion": torsion},
        "representative": list(cls.representative),
        "is_zero": cls.is_zero(),
    }


def _window_for(path: Path, max_cup: int):
    if path.suffix == ".coalg":
        return load_structure_fixture(path)
    x = _load_sset(path)
    s = chain_structure(x, max_cup)
    pkg = transfer(s, build_sdr(s.complex))
    return window_from_package(pkg)


def cmd_validate(args) -> dict:
    path = _resolve_input(args.input)
    x = parse_sset(path.read_text())  # raises on syntax or invariant errors
    return {
        "valid": True,
        "cells": {str(d): len(x.names(d)) for d in sorted(x.simplices)},
        "violations": [],
    }


def cmd_homology(args) -> dict:
    x = _load_sset(_resolve_input(args.input))
    from .simplicial import normalized_chains
    rep = homology(normalized_chains(x))
    return {"homology": rep.as_table()}


def cmd_coalgebra(args) -> dict:
    x = _load_sset(_resolve_input(args.input))
    s = chain_structure(x, args.max_cup)
    return {
        "max_cup": args.max_cup,
        "relations_verified": True,
        "operators": operator_dump(s),
    }


def cmd_transfer(args) -> dict:
    x = _load_sset(_resolve_input(args.input))
    s = chain_structure(x, args.max_cup)
    sdr = build_sdr(s.complex)
    pkg = transfer(s, sdr)
    h = pkg.homology
    operators = {}
    for name in sorted(pkg.hat_ops):
        op = pkg.hat_ops[name]
        entries = {}
        for d in h.degrees():
            for idx, label in enumerate(h.labels(d)):
                img = op.image_of(d, idx)
                if img:
                    entries[str(label)] = [
                        [coeff, "(x)".join(str(h.labels(e)[i]) for e, i in word) or "1"]
                        for coeff, word in img]
        operators[name] = entries
    return {
        "relations_violated": verify_relations(pkg),
        "homology_ranks": {str(d): h.rank(d) for d in h.degrees()},
        "operators": operators,
    }


def cmd_cobar(args) -> dict:
    x = _load_sset(_resolve_input(args.input))
    s = chain_structure(x, args.max_cup)
    red = reduce_structure(s)
    t = build_cobar(red, args.max_len)
    dd = [r for r in check_d_squared_cobar(t) if not r["ok"]]
    if dd:
        raise EinftyError(f"cobar differential fails to square to zero: {dd}")
    return {
        "max_len": args.max_len,
        "graded_pieces": gr_h0_ranks(t),
    }


def cmd_invariant(args) -> dict:
    w = _window_for(_resolve_input(args.input), args.max_cup)
    return {
        "h1_rank": w.h1_rank,
        "h2_rank": w.h2_rank,
        "sq_dual": _class_report(sq_dual_invariant(w)),
        "massey": _class_report(massey_invariant(w)),
    }


def cmd_compare(args) -> dict:
    wa = _window_for(_resolve_input(args.input), args.max_cup)
    wb = _window_for(_resolve_input(args.input_b), args.max_cup)
    sq_eq = class_equals(sq_dual_invariant(wa), sq_dual_invariant(wb))
    ma_eq = class_equals(massey_invariant(wa), massey_invariant(wb))
    return {"sq_dual_equal": sq_eq, "massey_equal": ma_eq}


def cmd_selfcheck(args) -> dict:
    from .simplicial import normalized_chains
    rng = random.Random(args.seed)
    checks = []

    def record(name: str, ok: bool, detail: str = ""):
        entry = {"check": name, "ok": bool(ok)}
        if detail:
            entry["detail"] = detail
        checks.append(entry)

    rep = check_d_squared(5, 4)
    record("operad d o d = 0 (arity <= 5, degree <= 4)",
           all(r["ok"] for r in rep))

    for name in SSET_FIXTURES:
        x = _load_sset(fixture_path(name))
        s = chain_structure(x, args.max_cup)
        record(f"{name}: structure relations", not s.verify())
        for k in range(0, args.max_cup):
            lhs = bracket_d(s.op(f"m2_{k + 1}"))
            rhs = s.op(f"m2_{k}") - transpose_swap(s.op(f"m2_{k}")).scale(
                -1 if k % 2 else 1)
            record(f"{name}: cup ladder k={k}", lhs == rhs)
        d0 = s.op("m2_0")
        record(f"{name}: coassociativity",
               compose_slot(d0, d0, 1) == compose_slot(d0, d0, 2))
        hrep = homology(s.complex)
        torsion_free = not hrep.torsion
        if torsion_free:
            sdr = build_sdr(s.complex)
            record(f"{name}: retraction identities", not sdr.verify())
            pkg = transfer(s, sdr)
            record(f"{name}: transfer relations", not verify_relations(pkg))
        if s.complex.rank(0) == 1:
            t = build_cobar(reduce_structure(s), args.max_len)
            record(f"{name}: cobar D o D = 0",
                   all(r["ok"] for r in check_d_squared_cobar(t)))

    # invariance of the classes under a seeded gauge twist of the retraction
    x = _load_sset(fixture_path("torus"))
    s = chain_structure(x, args.max_cup)
    sdr = build_sdr(s.complex)
    pkg = transfer(s, sdr)
    theta = {}
    for d in pkg.homology.degrees():
        m = IntMatrix(s.complex.rank(d), pkg.homology.rank(d))
        for i in range(m.nrows):
            for j in range(m.ncols):
                m[i, j] = rng.randint(-2, 2)
        theta[d] = m
    pkg2 = transfer(s, sdr_variant(sdr, theta))
    record("torus: invariants stable under gauge twist",
           class_equals(sq_dual_invariant(window_from_package(pkg)),
                        sq_dual_invariant(window_from_package(pkg2)))
           and class_equals(massey_invariant(window_from_package(pkg)),
                            massey_invariant(window_from_package(pkg2))))

    wb = load_structure_fixture(fixture_path("borromean"))
    wz = load_structure_fixture(fixture_path("zero"))
    record("borromean vs zero distinguished",
           not class_equals(massey_invariant(wb), massey_invariant(wz)))

    ok = all(c["ok"] for c in checks)
    return {"seed": args.seed, "all_ok": ok, "checks": checks}


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="einfty",
        description="Exact coalgebra structures on simplicial chains: "
                    "homology transfer, cobar construction, invariants.")
    ap.add_argument("--version", action="version", version=f"einfty {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, input_b=False):
        p.add_argument("input", help="path to a .sset/.coalg file or a bundled "
                                     "fixture name")
        if input_b:
            p.add_argument("input_b", help="second input for the comparison")
        p.add_argument("--max-cup", type=int, default=3, metavar="K",
                       help="highest cup coproduct to build (default 3)")
        p.add_argument("--out", metavar="PATH", help="write the report here "
                                                     "instead of stdout")

    p = sub.add_parser("validate", help="check a simplicial-set file")
    common(p)
    p.set_defaults(fn=cmd_validate)

    p = sub.add_parser("homology", help="integral homology table")
    common(p)
    p.set_defaults(fn=cmd_homology)

    p = sub.add_parser("coalgebra", help="chain-level operators and relations")
    common(p)
    p.set_defaults(fn=cmd_coalgebra)

    p = sub.add_parser("transfer", help="structure on homology via a retraction")
    common(p)
    p.set_defaults(fn=cmd_transfer)

    p = sub.add_parser("cobar", help="word-length graded ranks of H0 of the "
                                     "cobar construction")
    common(p)
    p.add_argument("--max-len", type=int, default=4, metavar="N",
                   help="word-length truncation (default 4); lengths up to "
                        "N-1 are reported")
    p.set_defaults(fn=cmd_cobar)

    p = sub.add_parser("invariant", help="dual Steenrod square and dual triple "
                                         "Massey classes")
    common(p)
    p.set_defaults(fn=cmd_invariant)

    p = sub.add_parser("compare", help="decide equality of the invariant "
                                       "classes of two inputs")
    common(p, input_b=True)
    p.set_defaults(fn=cmd_compare)

    p = sub.add_parser("selfcheck", help="run the bundled verification battery")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--max-cup", type=int, default=3, metavar="K")
    p.add_argument("--max-len", type=int, default=4, metavar="N")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(fn=cmd_selfcheck)

    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        results = args.fn(args)
    except EinftyError as exc:
        payload = {"command": args.command, "ok": False, "error": exc.payload()}
        sys.stderr.write(json.dumps(payload, indent=2) + "\n")
        return 1
    report = {"command": args.command, "ok": True}
    if getattr(args, "input", None):
        report["input"] = args.input
    if getattr(args, "input_b", None):
        report["input_b"] = args.input_b
    report["results"] = results
    _emit(report, getattr(args, "out", None))
    if args.command == "selfcheck" and not results["all_ok"]:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
