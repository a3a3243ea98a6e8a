#!/usr/bin/env python3
"""Search degeneration families for the closure arrows and write them to data/arrows/.

Run once offline; the test suite only re-verifies the committed files.

    python scripts/search_arrows.py [--out DIR] [--budget N]
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

from abelaffine.algebra import fingerprint, orbit_dim
from abelaffine.catalog import default_data_dir, load_catalog
from abelaffine.deformation import DegenerationFamily, search_degeneration, verify_arrow

# (generic algebra, limit algebra, how the arrow was read)
DIAGRAM_3D = [
    ("mu12", "mu1", "diagonal arrow from mu_12 into the mu_1 row"),
    ("mu14", "mu1", "diagonal arrow from mu_14 into the mu_1 row"),
    ("mu11", "mu10", "horizontal arrow mu_11 -> mu_10"),
    ("mu10", "mu1", "horizontal arrow mu_10 -> mu_1"),
    ("mu6", "mu1", "horizontal arrow mu_6 -> mu_1"),
    ("mu8", "mu6", "horizontal arrow mu_8 -> mu_6"),
    ("mu8", "mu9", "horizontal arrow mu_8 -> mu_9"),
    ("mu13", "mu11", "vertical arrow mu_13 -> mu_11"),
    ("mu4", "mu1", "vertical arrow mu_4 -> mu_1"),
    ("mu9", "mu7", "vertical arrow mu_9 -> mu_7"),
    ("mu5", "mu4", "horizontal arrow mu_5 -> mu_4"),
    ("mu5", "mu3", "horizontal arrow mu_5 -> mu_3"),
    ("mu7", "mu3", "horizontal arrow mu_7 -> mu_3"),
    ("mu3", "mu2", "vertical arrow mu_3 -> mu_2"),
]
CLOSURE_2D = [
    ("mu2", "mu1", "closure fact: mu_2 lies in the closure of the orbit of mu_1"),
    ("mu5", "mu1", "closure fact: mu_5 lies in the closure of the orbit of mu_1"),
    ("mu6", "mu1", "closure fact: mu_6 lies in the closure of the orbit of mu_1"),
    ("mu4", "mu1", "2D rigidity theorem: mu_4 deforms into mu_1 or mu_3"),
    ("mu4", "mu3", "2D rigidity theorem: mu_4 deforms into mu_1 or mu_3"),
]
# Not in the diagram: witnesses that mu_7 and mu_15 have non-open orbits.
SUPPLEMENTARY_3D = [
    ("mu7", "mu2", "supplementary non-rigidity witness, not read from the diagram"),
    ("mu15", "mu1", "supplementary non-rigidity witness, not read from the diagram"),
]

# Families outside the search box, derived by hand.  Both come from maximal
# ideals of split algebras R^4 collapsing onto a local algebra as t -> 0.
KNOWN = {
    ("mu14_3d", "mu1_3d"): (
        [["t", "t^2", "t^3"], ["t", "3*t^2", "7*t^3"], ["2*t", "8*t^2", "26*t^3"]],
        "hand derivation: basis x, x^2, x^3 of the ideal (x) in R[x]/(x(x-t)(x-2t)(x-3t)), "
        "written in the idempotent coordinates of mu_1",
    ),
    ("mu12_3d", "mu1_3d"): (
        [["t/2", "0", "t/2"], ["0", "0", "-t"], ["t/2", "t^2/2", "-t/2"]],
        "hand derivation: basis (x+y)/2, xy/2, (x-y)/2 of the ideal of functions vanishing at (0,0) "
        "on the grid {0,t}^2, written in the idempotent coordinates of mu_1",
    ),
}


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", type=Path, default=default_data_dir() / "arrows")
    ap.add_argument("--budget", type=int, default=20000)
    args = ap.parse_args(argv)
    cat = load_catalog()
    args.out.mkdir(parents=True, exist_ok=True)
    jobs = [(f"{a}_2d", f"{b}_2d", note, "closure") for a, b, note in CLOSURE_2D]
    jobs += [(f"{a}_3d", f"{b}_3d", note, "diagram") for a, b, note in DIAGRAM_3D]
    jobs += [(f"{a}_3d", f"{b}_3d", note, "supplementary") for a, b, note in SUPPLEMENTARY_3D]
    failures = 0
    for limit, generic, note, role in jobs:
        src, dst = cat.algebra(generic), cat.algebra(limit)
        start = time.time()
        result = search_degeneration(src, dst, budget=args.budget)
        if not result.found and (limit, generic) in KNOWN:
            matrix, why = KNOWN[(limit, generic)]
            result.found = True
            result.family = DegenerationFamily.from_strings(generic, limit, matrix, why)
        stem = f"{limit}_in_{generic}"
        diagram = f"{limit.split('_')[0]} -> {generic.split('_')[0]}"
        if result.found:
            fam = result.family
            doc = fam.to_json()
            doc["diagram"] = diagram
            doc["reading"] = note
            doc["role"] = role
            with open(args.out / f"{stem}.json", "w") as fh:
                json.dump(doc, fh, indent=1)
                fh.write("\n")
            ok = verify_arrow(type(fam).from_json(doc), cat)
            print(f"{stem:24s} found after {result.candidates:6d} candidates ({time.time() - start:.1f}s) verify={bool(ok)}")
            failures += not ok
        else:
            doc = {
                "source": generic,
                "target": limit,
                "status": "unrealized",
                "diagram": diagram,
                "reading": note,
                "role": role,
                "obstruction": result.obstruction,
                "obstruction_detail": result.detail,
                "orbit_dim_source": orbit_dim(src),
                "orbit_dim_target": orbit_dim(dst),
                "fingerprints_differ": fingerprint(src) != fingerprint(dst),
                "note": "unrealized: diagram reading uncertain",
            }
            with open(args.out / f"{stem}.json", "w") as fh:
                json.dump(doc, fh, indent=1)
                fh.write("\n")
            print(f"{stem:24s} NOT FOUND: {result.obstruction} ({result.candidates} candidates)")
    return 1 if failures else 0


if __name__ == "__main__":
    sys.exit(main())
