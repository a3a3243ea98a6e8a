"""Command-line entry point.

Exit status: 0 when every claim holds or is covered by an erratum, 1 on a
claim failure, 2 on usage errors and unknown names, 3 on bad data files.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .action import compare_closed_form, exp_action
from .algebra import check_associative, check_commutative, fingerprint
from .catalog import DATA_ENV, DataError, load_catalog
from .cohomology import h2s
from .deformation import search_degeneration, verify_arrow
from .exact import to_fraction
from .lattice import (
    abelian_check,
    closure_check,
    descends_to_torus,
    freeness_check,
    inverse_identity_check,
    source_action_check,
)
from .report import ACTION_TOL, ACTION_TRIALS, TORUS_TRIALS, name_key, build_report, failed, to_json, to_markdown

OK, CLAIM_FAILED, USAGE, DATA = 0, 1, 2, 3


class UnknownName(Exception):
    pass


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.15g}"
    return str(x)


def _algebras(cat, name):
    if name == "all":
        return [cat.entries[k].algebra for k in sorted(cat.entries, key=name_key)]
    try:
        return [cat.algebra(name)]
    except KeyError:
        pass
    try:
        return [cat.algebra(cat.action(name).algebra)]
    except KeyError:
        raise UnknownName(name) from None


def _one(cat, name):
    if name == "all":
        raise UnknownName("all (this command takes a single algebra)")
    return _algebras(cat, name)[0]


def cmd_list(cat, args) -> int:
    print(f"data directory: {cat.data_dir}")
    print("algebras:")
    for k in sorted(cat.entries, key=name_key):
        e = cat.entries[k]
        print(f"  {e.name:8s} dim {e.dim}  action {e.action}")
    print("actions: " + " ".join(sorted(cat.actions, key=name_key)))
    print("tori: " + " ".join(sorted(cat.tori)))
    print(f"arrows: {len(cat.arrows)} families, {len(cat.unrealized)} unrealized")
    print(f"errata: {len(cat.errata)}")
    return OK


def cmd_verify(cat, args) -> int:
    status = OK
    for a in _algebras(cat, args.name):
        fp = fingerprint(a)
        computed = {
            "commutative": check_commutative(a).ok,
            "associative": check_associative(a).ok,
            "has_unit": fp.has_unit,
            "nilpotent": fp.nilpotency_index is not None,
            "complete": fp.complete,
        }
        expected = {"commutative": True, "associative": True}
        expected.update({k: v.value for k, v in cat.expected_flags(a.name).items() if k in computed})
        bad = [k for k in computed if k in expected and computed[k] != expected[k]]
        flags = " ".join(f"{k}={'yes' if computed[k] else 'no'}" for k in computed)
        print(f"{a.name:8s} {'ok' if not bad else 'FAIL ' + ','.join(bad)}  {flags}")
        if bad:
            status = CLAIM_FAILED
    return status


def cmd_h2(cat, args) -> int:
    a = _one(cat, args.name)
    res = h2s(a)
    print(res.dim_h)
    print(f"{a.name}: dim Z_s^2 = {res.dim_z}, dim B_s^2 = {res.dim_b}, dim H_s^2 = {res.dim_h}")
    for idx, rep in enumerate(res.representatives, 1):
        terms = []
        for (i, j), coeffs in sorted(rep.nonzero_values().items()):
            body = " + ".join(f"{c}*e{k}" for k, c in sorted(coeffs.items()))
            terms.append(f"phi(e{i},e{j}) = {body}")
        print(f"  psi_{idx}: " + "; ".join(terms))
    return OK


def cmd_fingerprint(cat, args) -> int:
    out = {a.name: fingerprint(a).as_dict() for a in _algebras(cat, args.name)}
    print(json.dumps(out, indent=1))
    return OK


def _parse_params(text: str) -> list:
    try:
        return [to_fraction(p) for p in text.split(",") if p.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"bad parameter list {text!r}") from None


def cmd_action(cat, args) -> int:
    a = _one(cat, args.name)
    params = args.params
    if len(params) != a.dim:
        print(f"error: {a.name} takes {a.dim} parameters", file=sys.stderr)
        return USAGE
    if args.float:
        params = [float(p) for p in params]
    m = exp_action(a, params)
    kind = "exact" if m.is_exact else "float"
    print(f"{a.name} at ({', '.join(_fmt(p) for p in args.params)}) [{kind}]")
    print("linear [" + ", ".join("[" + ", ".join(_fmt(x) for x in row) + "]" for row in m.linear) + "]")
    print("translation (" + ", ".join(_fmt(x) for x in m.translation) + ")")
    return OK


def cmd_compare(cat, args) -> int:
    status = OK
    for name in sorted(cat.actions, key=name_key):
        act = cat.action(name)
        alg = cat.algebra(act.algebra)
        res = compare_closed_form(alg, act, args.trials, args.tol)
        line = f"{name:8s} max deviation {res.max_deviation:.3g}"
        if res.ok:
            print(line + "  match")
            continue
        fixes = cat.errata_for(name, "action")
        if fixes and compare_closed_form(alg, cat.corrected_action(name), args.trials, args.tol).ok:
            print(line + f"  erratum ({', '.join(f.id for f in fixes)})")
            continue
        print(line + f"  MISMATCH at params {tuple(_fmt(p) for p in res.failing_params)} entry {res.failing_entry}")
        status = CLAIM_FAILED
    return status


def cmd_arrows(cat, args) -> int:
    if args.mode == "search":
        if not (args.src and args.dst):
            print("error: arrows search needs <src> <dst>", file=sys.stderr)
            return USAGE
        src, dst = _one(cat, args.src), _one(cat, args.dst)
        res = search_degeneration(src, dst, budget=args.budget)
        if res.found:
            print(json.dumps(res.family.to_json(), indent=1))
            return OK
        print(f"no family found after {res.candidates} candidates: {res.obstruction} {json.dumps(res.detail)}")
        return CLAIM_FAILED
    fams = cat.arrows
    if args.src:
        src = _one(cat, args.src).name
        fams = [f for f in fams if f.source == src]
        if args.dst:
            dst = _one(cat, args.dst).name
            fams = [f for f in fams if f.target == dst]
    status = OK
    for f in sorted(fams, key=lambda f: (name_key(f.source), name_key(f.target))):
        chk = verify_arrow(f, cat)
        print(f"{f.target:8s} in closure of {f.source:8s} {'ok' if chk else 'FAIL ' + str(chk.witness)}")
        status = status if chk else CLAIM_FAILED
    if not args.src:
        for doc in cat.unrealized:
            print(f"{doc['target']:8s} in closure of {doc['source']:8s} unrealized: {doc.get('obstruction')}")
    return status


def cmd_torus(cat, args) -> int:
    status = OK
    names = sorted(cat.tori, key=lambda s: (s.startswith("T2"), s))
    if args.name:
        try:
            names = [cat.torus(args.name).name]
        except KeyError:
            raise UnknownName(args.name) from None
    for name in names:
        fam = cat.torus(name)
        alg = cat.algebra(cat.action(fam.source_action).algebra)
        clo = closure_check(fam, TORUS_TRIALS)
        checks = {
            "closure": clo.ok,
            "inverse": inverse_identity_check(fam, TORUS_TRIALS).ok,
            "integral": descends_to_torus(fam.element([1] * fam.param_count)),
            "free": freeness_check(fam, TORUS_TRIALS).ok,
            "source": source_action_check(fam, alg).ok,
            "abelian": abelian_check(fam, TORUS_TRIALS).ok,
        }
        ok = all(checks.values())
        law = ", ".join(f"{k} = {v}" for k, v in clo.law.items())
        print(f"{name:7s} {'ok' if ok else 'FAIL'}  " + " ".join(f"{k}={'yes' if v else 'no'}" for k, v in checks.items()))
        if law:
            print(f"        law: {law}")
        status = status if ok else CLAIM_FAILED
    counts = {}
    for fam in cat.tori.values():
        counts[fam.group] = counts.get(fam.group, 0) + 1
    print(f"counts: T3 {counts.get('T3', 0)} (expected 7), T2 {counts.get('T2', 0)} (expected 2)")
    return status


def cmd_report(cat, args) -> int:
    rep = build_report(cat, workers=args.workers)
    text = to_json(rep) if args.format == "json" else to_markdown(rep)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    bad = failed(rep)
    for c in bad:
        print(f"claim failed: {c['id']} expected {c['expected']!r} computed {c['computed']!r}", file=sys.stderr)
    return CLAIM_FAILED if bad else OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="abelaffine", description="Verify the catalog of affine structures.")
    ap.add_argument("--data-dir", help=f"catalog directory (default: ${DATA_ENV} or the bundled data)")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("list", help="catalog inventory").set_defaults(func=cmd_list)
    p = sub.add_parser("verify", help="axioms and flags")
    p.add_argument("name")
    p.set_defaults(func=cmd_verify)
    p = sub.add_parser("h2", help="Harrison H^2 dimension and basis")
    p.add_argument("name")
    p.set_defaults(func=cmd_h2)
    p = sub.add_parser("fingerprint", help="isomorphism invariants")
    p.add_argument("name")
    p.set_defaults(func=cmd_fingerprint)
    p = sub.add_parser("action", help="exp of the affine representation")
    p.add_argument("name")
    p.add_argument("--params", type=_parse_params, required=True, help="comma separated, e.g. 1,2 or 1/2,3")
    p.add_argument("--float", action="store_true", help="force floating point evaluation")
    p.set_defaults(func=cmd_action)
    p = sub.add_parser("compare-actions", help="printed closed forms against exp(rep)")
    p.add_argument("--trials", type=int, default=ACTION_TRIALS)
    p.add_argument("--tol", type=float, default=ACTION_TOL)
    p.set_defaults(func=cmd_compare)
    p = sub.add_parser("arrows", help="degeneration families")
    p.add_argument("mode", choices=("verify", "search"))
    p.add_argument("src", nargs="?", help="generic algebra")
    p.add_argument("dst", nargs="?", help="limit algebra")
    p.add_argument("--budget", type=int, default=20000)
    p.set_defaults(func=cmd_arrows)
    p = sub.add_parser("torus", help="crystallographic torus groups")
    p.add_argument("mode", choices=("verify",))
    p.add_argument("name", nargs="?")
    p.set_defaults(func=cmd_torus)
    p = sub.add_parser("report", help="regenerate every table with verdicts")
    p.add_argument("--out")
    p.add_argument("--format", choices=("json", "md"), default="json")
    p.add_argument("--workers", type=int, default=None, help="processes for independent sections")
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cat = load_catalog(args.data_dir)
        return args.func(cat, args)
    except UnknownName as exc:
        print(f"error: unknown name {exc}", file=sys.stderr)
        return USAGE
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return DATA


if __name__ == "__main__":
    sys.exit(main())
