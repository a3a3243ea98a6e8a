"""Claim-by-claim verification report over the whole catalog.

Each claim records a citation, the printed (expected) value, the computed
value and a verdict: ``match``, ``erratum`` (printed value disagrees, a
recorded correction agrees), ``unrealized`` (an arrow with no family, shipped
with its obstruction analysis) or ``mismatch``.
"""
from __future__ import annotations

import json
import multiprocessing
import os
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Optional

from . import __version__
from . import rng as _rng
from .action import compare_closed_form, describe_domain, group_law_check, translation_image_sample
from .algebra import (
    check_associative,
    check_commutative,
    check_left_symmetric,
    derivations,
    fingerprint,
    is_complete,
    orbit_dim,
)
from .catalog import Catalog, heisenberg_example
from .cohomology import (
    SymmetricCochain,
    coboundary1,
    coboundary2,
    h2s,
    hochschild_h2,
    independent_mod_coboundaries,
    is_cocycle,
)
from .deformation import verify_arrow
from .exact import RatMatrix
from .lattice import (
    abelian_check,
    closure_check,
    descends_to_torus,
    freeness_check,
    inverse_identity_check,
    source_action_check,
)

SCHEMA = "abelaffine-report/1"
VERDICTS = ("match", "erratum", "unrealized", "mismatch")
SECTIONS = (
    "axioms",
    "classification",
    "flags",
    "cohomology",
    "consistency",
    "rigidity",
    "actions",
    "domains",
    "arrows",
    "tori",
    "heisenberg",
)

ACTION_TOL = 1e-9
ACTION_TRIALS = 100
TORUS_TRIALS = 200
DELTA_TRIALS = 50

CITE = {
    "count_2d": "2D classification: six affinely non-equivalent affine structures",
    "count_3d": "3D classification: fifteen invariant affinely non-equivalent affine structures",
    "distinct": "classification lists pairwise non-isomorphic laws",
    "axioms": "tables of commutative associative laws (commutativity and associativity of the structure constants)",
    "consistency": "coboundaries of endomorphisms: dim B = n^2 - dim Der",
    "delta": "coboundary operator squares to zero",
    "group_law": "affine representation of a commutative law is abelian, so exp is a homomorphism",
    "t3_count": "T^3 theorem: there exist 7 affine structures on the torus",
    "t2_count": "T^2 theorem: only the structures A_4 and A_5 descend to the torus",
    "heis": "Heisenberg example: left-symmetric product inducing the Heisenberg bracket",
    "heis_complete": "Heisenberg example: the structure is non complete for a != 0",
}


def _s(x):
    """JSON-stable rendering of exact values."""
    if isinstance(x, Fraction):
        return str(x) if x.denominator != 1 else int(x)
    if isinstance(x, (list, tuple)):
        return [_s(v) for v in x]
    if isinstance(x, dict):
        return {str(k): _s(v) for k, v in x.items()}
    if isinstance(x, float):
        return float(f"{x:.6g}")
    return x


class _Builder:
    def __init__(self):
        self.claims = []

    def add(self, section, subject, prop, citation, expected, computed, verdict=None, **extra):
        if not citation:
            raise ValueError(f"claim {section}/{subject}/{prop} has no citation")
        if verdict is None:
            verdict = "match" if expected == computed else "mismatch"
        row = {
            "id": f"{section}/{subject}/{prop}",
            "section": section,
            "subject": subject,
            "property": prop,
            "citation": citation,
            "expected": _s(expected),
            "computed": _s(computed),
            "verdict": verdict,
        }
        row.update({k: _s(v) for k, v in extra.items()})
        self.claims.append(row)
        return row


def name_key(name: str):
    stem, _, dim = name.partition("_")
    digits = "".join(ch for ch in stem if ch.isdigit())
    return (dim, stem.rstrip("0123456789"), int(digits or 0), name)


def _entries(cat: Catalog):
    return [cat.entries[k] for k in sorted(cat.entries, key=name_key)]


def _printed_basis_ok(alg, cochains) -> dict:
    bad = [i + 1 for i, c in enumerate(cochains) if not is_cocycle(alg, c)]
    rank = independent_mod_coboundaries(alg, cochains)
    return {"non_cocycles": bad, "rank": rank, "count": len(cochains), "ok": not bad and rank == len(cochains)}


def _core(cat: Catalog, b: _Builder) -> dict:
    entries = _entries(cat)
    fps = {e.name: fingerprint(e.algebra) for e in entries}
    h2 = {e.name: h2s(e.algebra) for e in entries}

    for e in entries:
        a = e.algebra
        ca, cc = check_associative(a), check_commutative(a)
        b.add("axioms", e.name, "commutative", CITE["axioms"], True, cc.ok, witness=cc.witness)
        b.add("axioms", e.name, "associative", CITE["axioms"], True, ca.ok, witness=ca.witness)

    for n, key in ((2, "count_2d"), (3, "count_3d")):
        group = [e.name for e in entries if e.dim == n]
        b.add("classification", f"{n}D", "count", CITE[key], 6 if n == 2 else 15, len(group))
        seen, clash = {}, []
        for name in group:
            if fps[name] in seen:
                clash.append([seen[fps[name]], name])
            seen.setdefault(fps[name], name)
        b.add("classification", f"{n}D", "distinct_fingerprints", CITE["distinct"], True, not clash, clashes=clash)

    for e in entries:
        fp = fps[e.name]
        computed = {"has_unit": fp.has_unit, "nilpotent": fp.nilpotency_index is not None, "complete": fp.complete}
        for prop in ("has_unit", "nilpotent", "complete"):
            if prop in e.expected:
                ex = e.expected[prop]
                b.add("flags", e.name, prop, ex.citation, ex.value, computed[prop])

    for e in entries:
        res = h2[e.name]
        if "dim_h2s" in e.expected:
            ex = e.expected["dim_h2s"]
            verdict = None
            fixes = cat.errata_for(e.name, "h2_dim")
            if ex.value != res.dim_h and fixes and fixes[0].corrected == res.dim_h:
                verdict = "erratum"
            b.add("cohomology", e.name, "dim_h2s", ex.citation, ex.value, res.dim_h, verdict,
                  dim_z=res.dim_z, dim_b=res.dim_b, **({"erratum": fixes[0].id} if verdict else {}))
        if "hochschild_h2" in e.expected:
            ex = e.expected["hochschild_h2"]
            b.add("cohomology", e.name, "hochschild_h2", ex.citation, ex.value, hochschild_h2(e.algebra))
        if e.printed_h2:
            got = _printed_basis_ok(e.algebra, [p.cochain for p in e.printed_h2])
            verdict = None
            extra = {}
            if not got["ok"]:
                for fix in cat.errata_for(e.name, "h2_representative"):
                    corr = [SymmetricCochain.from_values(e.dim, {(i, j): dict(kv) for i, j, kv in c["values"]})
                            for c in fix.corrected]
                    chk = _printed_basis_ok(e.algebra, corr)
                    if chk["ok"] and chk["count"] == res.dim_h:
                        verdict, extra = "erratum", {"erratum": fix.id}
            b.add("cohomology", e.name, "printed_basis", e.printed_h2_citation, True, got["ok"], verdict,
                  labels=[p.label for p in e.printed_h2], non_cocycles=got["non_cocycles"], rank=got["rank"],
                  **extra)

    prod, br = heisenberg_example(a=1)
    chk = check_left_symmetric(prod, br)
    b.add("heisenberg", "a=1", "left_symmetric", CITE["heis"], True, chk.ok, witness=chk.witness)
    b.add("heisenberg", "a=1", "complete", CITE["heis_complete"], False, is_complete(prod).complete)
    bad = check_left_symmetric(heisenberg_example(a=1, shift=1)[0], br)
    b.add("heisenberg", "a=1, perturbed", "left_symmetric", CITE["heis"], False, bad.ok, witness=bad.witness)

    return {
        "fingerprints": {e.name: fps[e.name].as_dict() for e in entries},
        "h2s": {e.name: {"dim_z": h2[e.name].dim_z, "dim_b": h2[e.name].dim_b, "dim_h": h2[e.name].dim_h}
                for e in entries},
    }


def _consistency(cat: Catalog, b: _Builder, names=None) -> dict:
    for e in _entries(cat):
        if names is not None and e.name not in names:
            continue
        a, n = e.algebra, e.dim
        b.add("consistency", e.name, "dim_b", CITE["consistency"], n * n - len(derivations(a)), h2s(a).dim_b)
        gen = _rng.generator("delta:" + e.name)
        bad = 0
        for _ in range(DELTA_TRIALS):
            f = RatMatrix.from_rows(_rng.integer_matrix(gen, n))
            if any(any(v) for v in coboundary2(a, coboundary1(a, f)).values()):
                bad += 1
        b.add("consistency", e.name, "delta_squared", CITE["delta"], 0, bad, trials=DELTA_TRIALS)
    return {}


def _arrows(cat: Catalog, b: _Builder) -> dict:
    verified = {}
    roles = {"closure": 0, "diagram": 1, "supplementary": 2}
    fams = sorted(cat.arrows, key=lambda f: (roles.get(cat.arrow_meta[(f.source, f.target)].get("role"), 9),
                                             name_key(f.target), name_key(f.source)))
    for f in fams:
        meta = cat.arrow_meta[(f.source, f.target)]
        chk = verify_arrow(f, cat)
        od_s, od_t = orbit_dim(cat.algebra(f.source)), orbit_dim(cat.algebra(f.target))
        subject = f"{f.target} in closure of {f.source}"
        cit = f"degeneration diagram, {meta.get('reading', meta.get('diagram', ''))}"
        b.add("arrows", subject, "exact_limit", cit, True, chk.ok, role=meta.get("role"),
              witness=chk.witness, family=[[str(x) for x in row] for row in meta["matrix"]])
        b.add("arrows", subject, "orbit_dim_drops", cit, True, od_t < od_s, role=meta.get("role"),
              orbit_dim_source=od_s, orbit_dim_target=od_t)
        if chk.ok:
            verified.setdefault(f.target, []).append(f.source)
    for doc in sorted(cat.unrealized, key=lambda d: (name_key(d["target"]), name_key(d["source"]))):
        subject = f"{doc['target']} in closure of {doc['source']}"
        b.add("arrows", subject, "exact_limit", f"degeneration diagram, {doc.get('reading', '')}", True,
              doc.get("obstruction"), "unrealized", role=doc.get("role"),
              obstruction_detail=doc.get("obstruction_detail"), note=doc.get("note", ""),
              orbit_dim_source=doc.get("orbit_dim_source"), orbit_dim_target=doc.get("orbit_dim_target"))
    return {"verified": verified}


def _rigidity(cat: Catalog, b: _Builder, h2: dict, verified: dict) -> None:
    for e in _entries(cat):
        if "rigid" not in e.expected:
            continue
        ex = e.expected["rigid"]
        sources = sorted((s for s in verified.get(e.name, []) if s != e.name), key=name_key)
        if h2[e.name]["dim_h"] == 0:
            computed, why = True, "H_s^2 = 0"
        elif sources:
            computed, why = False, f"degenerates from {sources[0]}"
        else:
            computed, why = "undetermined", "H_s^2 != 0 and no verified family into it"
        b.add("rigidity", e.name, "rigid", ex.citation, ex.value, computed, reason=why)


def _actions(cat: Catalog, b: _Builder) -> dict:
    for e in _entries(cat):
        chk = group_law_check(e.algebra)
        b.add("actions", e.name, "group_law", CITE["group_law"], True, chk.ok, witness=chk.witness)
    for name in sorted(cat.actions, key=name_key):
        act = cat.action(name)
        alg = cat.algebra(act.algebra)
        cmp = compare_closed_form(alg, act, ACTION_TRIALS, ACTION_TOL)
        verdict, extra = None, {}
        if not cmp.ok and cat.errata_for(name, "action"):
            fixed = compare_closed_form(alg, cat.corrected_action(name), ACTION_TRIALS, ACTION_TOL)
            extra = {"erratum": [x.id for x in cat.errata_for(name, "action")], "corrected_ok": fixed.ok,
                     "corrected_max_deviation": fixed.max_deviation}
            if fixed.ok:
                verdict = "erratum"
        b.add("actions", name, "closed_form", act.citation, True, cmp.ok, verdict,
              max_deviation=cmp.max_deviation, failing_params=cmp.failing_params,
              failing_entry=cmp.failing_entry, **extra)
    return {}


def _domains(cat: Catalog, b: _Builder) -> dict:
    for name in sorted(cat.actions, key=name_key):
        act = cat.action(name)
        if not act.domain:
            continue
        alg = cat.algebra(act.algebra)
        dom = {k: v for k, v in act.domain.items() if k != "citation"}
        res = translation_image_sample(alg, dom)
        verdict, extra = None, {}
        if not res.ok:
            for fix in cat.errata_for(name, "domain"):
                if translation_image_sample(alg, fix.corrected).ok:
                    verdict, extra = "erratum", {"erratum": fix.id, "corrected": describe_domain(fix.corrected)}
        b.add("domains", name, "translation_image", act.domain.get("citation", act.citation), describe_domain(dom),
              describe_domain(dom) if res.ok else "differs", verdict, evidence=res.evidence, **extra)
    return {}


def _tori(cat: Catalog, b: _Builder, names=None) -> dict:
    counts = {}
    for name in sorted(cat.tori, key=lambda s: (s.startswith("T2"), s)):
        fam = cat.torus(name)
        counts[fam.group] = counts.get(fam.group, 0) + 1
        if names is not None and name not in names:
            continue
        clo = closure_check(fam, TORUS_TRIALS)
        inv = inverse_identity_check(fam, TORUS_TRIALS)
        free = freeness_check(fam, TORUS_TRIALS)
        gen = _rng.generator("integral:" + name)
        integral = all(
            descends_to_torus(fam.element([gen.randint(-5, 5) for _ in fam.params])) for _ in range(TORUS_TRIALS)
        )
        src = source_action_check(fam, cat.algebra(cat.action(fam.source_action).algebra))
        ab = abelian_check(fam, TORUS_TRIALS)
        b.add("tori", name, "closure", fam.citation, True, clo.ok, law=clo.law, witness=clo.witness)
        b.add("tori", name, "inverse_identity", fam.citation, True, inv.ok, law=inv.law, witness=inv.witness)
        b.add("tori", name, "integral_linear_part", fam.citation, True, integral)
        b.add("tori", name, "fixed_point_free_on_domain", fam.citation, True, free.ok,
              domain=describe_domain(fam.domain).replace("R^n", "R^3" if fam.dim == 3 else "R^2"),
              fixed_points_outside_domain=free.fixed_outside, witness=free.witness)
        b.add("tori", name, "source_action", fam.citation, True, src.ok,
              source=f"{fam.source_action} at {list(map(repr, fam.source_params))}")
        b.add("tori", name, "abelian", fam.citation, True, ab.ok, witness=ab.witness)
    if names is None or "counts" in names:
        b.add("tori", "T3", "count", CITE["t3_count"], 7, counts.get("T3", 0))
        b.add("tori", "T2", "count", CITE["t2_count"], 2, counts.get("T2", 0))
    return {}


# (job name, function, keyword arguments); jobs are independent and may run in parallel
_TORI_SPLIT = (("Gamma1", "Gamma2", "Gamma3", "Gamma4"), ("Gamma5", "Gamma6", "Gamma7", "T2_A4", "T2_A5", "counts"))
_JOBS = (
    ("core", _core, {}),
    ("consistency", _consistency, {}),
    ("arrows", _arrows, {}),
    ("actions", _actions, {}),
    ("domains", _domains, {}),
    ("tori-a", _tori, {"names": _TORI_SPLIT[0]}),
    ("tori-b", _tori, {"names": _TORI_SPLIT[1]}),
)


def _run_job(data_dir: str, index: int):
    from .catalog import load_catalog

    cat = load_catalog(data_dir)
    _, fn, kw = _JOBS[index]
    b = _Builder()
    extra = fn(cat, b, **kw)
    return b.claims, extra


def build_report(cat: Catalog, workers: Optional[int] = None) -> dict:
    """Run every check and collect the claims.

    ``workers`` > 1 spreads the independent sections over processes; the
    output does not depend on it.
    """
    workers = workers if workers is not None else min(len(_JOBS), os.cpu_count() or 1)
    if workers > 1:
        ctx = multiprocessing.get_context("spawn")
        with ProcessPoolExecutor(workers, mp_context=ctx) as pool:
            results = list(pool.map(_run_job, [str(cat.data_dir)] * len(_JOBS), range(len(_JOBS))))
    else:
        results = []
        for _, fn, kw in _JOBS:
            b = _Builder()
            extra = fn(cat, b, **kw)
            results.append((b.claims, extra))
    jobs = {name: res for (name, _, _), res in zip(_JOBS, results)}
    b = _Builder()
    for claims, _ in results:
        b.claims.extend(claims)
    _rigidity(cat, b, jobs["core"][1]["h2s"], jobs["arrows"][1]["verified"])
    order = {s: i for i, s in enumerate(SECTIONS)}
    claims = sorted(enumerate(b.claims), key=lambda ic: (order[ic[1]["section"]], ic[0]))
    claims = [c for _, c in claims]
    summary = {v: sum(1 for c in claims if c["verdict"] == v) for v in VERDICTS}
    summary["claims"] = len(claims)
    return {"schema": SCHEMA, "version": __version__, "summary": summary, "claims": claims,
            "tables": jobs["core"][1]}


def failed(report: dict) -> list:
    return [c for c in report["claims"] if c["verdict"] == "mismatch"]


def to_json(report: dict) -> str:
    return json.dumps(report, indent=1, sort_keys=True, ensure_ascii=False) + "\n"


def _cell(v) -> str:
    if isinstance(v, bool):
        return "yes" if v else "no"
    if v is None:
        return ""
    text = v if isinstance(v, str) else json.dumps(v, ensure_ascii=False, sort_keys=True)
    return text.replace("|", "\\|")


def to_markdown(report: dict) -> str:
    s = report["summary"]
    lines = [
        "# Verification report",
        "",
        f"schema `{report['schema']}`, version {report['version']}",
        "",
        " | ".join(f"{v}: {s[v]}" for v in VERDICTS) + f" | claims: {s['claims']}",
        "",
    ]
    for section in SECTIONS:
        rows = [c for c in report["claims"] if c["section"] == section]
        if not rows:
            continue
        lines += [f"## {section}", "", "| subject | property | expected | computed | verdict | citation |",
                  "|---|---|---|---|---|---|"]
        for c in rows:
            lines.append("| " + " | ".join(_cell(c[k]) for k in
                                            ("subject", "property", "expected", "computed", "verdict", "citation"))
                         + " |")
        lines.append("")
    lines += ["## fingerprints", "",
              "| algebra | unit | nil index | dim A^2 | dim Ann | dim Rad | trace sig | dim Der | dim H_s^2 | complete |",
              "|---|---|---|---|---|---|---|---|---|---|"]
    for name, fp in report["tables"]["fingerprints"].items():
        lines.append("| " + " | ".join(_cell(x) for x in (
            name, fp["has_unit"], fp["nilpotency_index"], fp["dim_square"], fp["dim_annihilator"],
            fp["dim_radical"], fp["trace_signature"], fp["dim_derivations"], fp["dim_h2s"], fp["complete"])) + " |")
    lines.append("")
    return "\n".join(lines)
