"""The twelve acceptance criteria, one test each.

Every test records a PASS/FAIL line (collected in RESULTS and printed in the
terminal summary) before asserting, so failing criteria still report their
evidence.
"""
import subprocess
import sys

from abelaffine import rng
from abelaffine.action import compare_closed_form, translation_image_sample
from abelaffine.algebra import (
    check_associative,
    check_commutative,
    check_left_symmetric,
    derivations,
    find_unit,
    fingerprint,
    is_complete,
    orbit_dim,
    power_filtration,
)
from abelaffine.catalog import heisenberg_example
from abelaffine.cohomology import coboundary1, h2s, hochschild_h2, independent_mod_coboundaries, is_cocycle
from abelaffine.deformation import verify_arrow
from abelaffine.exact import RatMatrix
from abelaffine.lattice import (
    closure_check,
    descends_to_torus,
    freeness_check,
    inverse_identity_check,
)

RESULTS = {}

ALG_2D = [f"mu{i}_2d" for i in range(1, 7)]
ALG_3D = [f"mu{i}_3d" for i in range(1, 16)]


def record(number, title, ok, detail):
    RESULTS[number] = (bool(ok), title, detail)
    print(f"criterion {number}: {'PASS' if ok else 'FAIL'} {title}: {detail}")
    assert ok, detail


def short(names):
    return "{" + ",".join(n.split("_")[0] for n in names) + "}"


def test_criterion_01_axioms(cat):
    bad = [n for n in ALG_2D + ALG_3D
           if not (check_commutative(cat.algebra(n)) and check_associative(cat.algebra(n)))]
    record(1, "axioms", not bad and len(cat.entries) == 21, f"{21 - len(bad)}/21 commutative and associative")


def test_criterion_02_classification(cat):
    n2, n3 = len(cat.by_dim(2)), len(cat.by_dim(3))
    distinct = all(len({fingerprint(cat.algebra(n)) for n in group}) == len(group) for group in (ALG_2D, ALG_3D))
    record(2, "classification counts", (n2, n3) == (6, 15) and distinct,
           f"2D {n2}, 3D {n3}, fingerprints pairwise distinct: {distinct}")


def test_criterion_03_flags(cat):
    def sets(names):
        unital = [n for n in names if find_unit(cat.algebra(n)) is not None]
        nil = [n for n in names if power_filtration(cat.algebra(n)).nilpotent]
        return unital, nil

    u2, n2 = sets(ALG_2D)
    u3, n3 = sets(ALG_3D)
    ok = (u2 == ["mu1_2d", "mu2_2d", "mu3_2d"] and n2 == ["mu4_2d", "mu5_2d"]
          and u3 == ALG_3D[:5] and n3 == ALG_3D[10:])
    record(3, "unital and nilpotent flags", ok,
           f"2D unital {short(u2)} nilpotent {short(n2)}; 3D unital {short(u3)} nilpotent {short(n3)}")


def test_criterion_04_completeness(cat):
    # is_complete cross-checks nilpotency of R_X whenever the traces vanish
    c2 = [n for n in ALG_2D if is_complete(cat.algebra(n))]
    c3 = [n for n in ALG_3D if is_complete(cat.algebra(n))]
    ok = c2 == ["mu4_2d", "mu5_2d"] and c3 == ALG_3D[10:]
    record(4, "completeness", ok, f"complete 2D {short(c2)}, 3D {short(c3)}")


TABLED_H2 = {3: 1, 4: 2, 5: 4, 6: 1, 7: 1, 8: 6, 9: 3, 10: 1, 11: 3, 12: 4, 13: 7, 14: 3, 15: 18}


def test_criterion_05_cohomology(cat):
    wrong_dims = []
    for i, printed in TABLED_H2.items():
        got = h2s(cat.algebra(f"mu{i}_3d")).dim_h
        if got != printed:
            wrong_dims.append(f"mu{i} printed {printed} computed {got}")
    hoch = [hochschild_h2(cat.algebra(n)) for n in ("mu1_3d", "mu2_3d")]
    bad_reps = []
    for name in ALG_3D:
        entry = cat.entry(name)
        if not entry.printed_h2:
            continue
        cochains = [p.cochain for p in entry.printed_h2]
        non_cocycles = [p.label for p in entry.printed_h2 if not is_cocycle(entry.algebra, p.cochain)]
        rank = independent_mod_coboundaries(entry.algebra, cochains)
        if non_cocycles or rank != len(cochains):
            bad_reps.append(f"{name.split('_')[0]} (non-cocycles {non_cocycles}, rank {rank}/{len(cochains)})")
    ok = not wrong_dims and hoch == [0, 0] and not bad_reps
    detail = (f"{13 - len(wrong_dims)}/13 tabled dims agree; Hochschild H^2(mu1, mu2) = {hoch}; "
              f"dimension disagreements: {wrong_dims or 'none'}; printed bases failing: {bad_reps or 'none'}")
    record(5, "cohomology tables", ok, detail)


def test_criterion_06_rigidity(cat):
    zero_2d = [n for n in ALG_2D if h2s(cat.algebra(n)).dim_h == 0]
    zero_3d = [n for n in ALG_3D if h2s(cat.algebra(n)).dim_h == 0]
    targets = {f.target for f in cat.arrows if f.source != f.target and verify_arrow(f, cat)}
    non_rigid_3d = [n for n in ALG_3D if n in targets]
    ok = zero_2d == ["mu1_2d", "mu3_2d"] and zero_3d == ["mu1_3d", "mu2_3d"] and non_rigid_3d == ALG_3D[2:]
    record(6, "rigidity", ok, f"H_s^2 = 0 in 2D for {short(zero_2d)}, in 3D for {short(zero_3d)}; "
                              f"{len(non_rigid_3d)}/13 other 3D laws degenerate from a verified family")


def test_criterion_07_consistency(cat):
    bad_b, bad_delta = [], []
    for name in ALG_2D + ALG_3D:
        a = cat.algebra(name)
        n = a.dim
        if h2s(a).dim_b != n * n - len(derivations(a)):
            bad_b.append(name)
        gen = rng.generator("acceptance-delta:" + name)
        for _ in range(50):
            f = RatMatrix.from_rows(rng.integer_matrix(gen, n))
            if not is_cocycle(a, coboundary1(a, f)):
                bad_delta.append(name)
                break
    record(7, "internal consistency", not bad_b and not bad_delta,
           f"dim B = n^2 - dim Der fails for {bad_b or 'none'}; delta o delta != 0 for {bad_delta or 'none'} "
           f"(50 draws each)")


def test_criterion_08_actions(cat):
    failing_2d = []
    for i in range(1, 7):
        act = cat.action(f"A{i}_2d")
        res = compare_closed_form(cat.algebra(act.algebra), act, trials=100, tol=1e-9)
        if not res:
            failing_2d.append(f"{act.name} (deviation {res.max_deviation:.3g} at {res.failing_params})")
    verbatim, uncovered = 0, []
    for i in range(1, 16):
        act = cat.action(f"A{i}_3d")
        alg = cat.algebra(act.algebra)
        if compare_closed_form(alg, act, trials=100, tol=1e-9):
            verbatim += 1
        elif not (cat.errata_for(act.name, "action")
                  and compare_closed_form(alg, cat.corrected_action(act.name), trials=100, tol=1e-9)):
            uncovered.append(act.name)
    a10 = cat.corrected_action("A10_3d")
    a10_ok = (a10.components[2].replace(" ", "") == "b*y+z+b^2/2+c"
              and compare_closed_form(cat.algebra("mu10_3d"), a10, trials=100, tol=1e-9).ok)
    ok = not failing_2d and verbatim >= 12 and not uncovered and a10_ok
    record(8, "affine actions", ok,
           f"2D printed forms failing: {failing_2d or 'none'}; 3D verbatim {verbatim}/15, "
           f"uncovered mismatches {uncovered or 'none'}, A10 z-translation corrected: {a10_ok}")


def test_criterion_09_degenerations(cat):
    ok_closure = all(
        any(f.source == "mu1_2d" and f.target == t and verify_arrow(f, cat) for f in cat.arrows)
        for t in ("mu2_2d", "mu5_2d", "mu6_2d"))
    diagram = cat.arrows_with_role("diagram")
    verified = [f for f in diagram if verify_arrow(f, cat)]
    unrealized = [d for d in cat.unrealized if d.get("role") == "diagram"]
    documented = all(d.get("obstruction") and "unrealized" in d.get("note", "") for d in unrealized)
    monotone = all(orbit_dim(cat.algebra(f.target)) < orbit_dim(cat.algebra(f.source))
                   for f in cat.arrows if verify_arrow(f, cat))
    total = len(verified) + len(unrealized)
    ok = ok_closure and len(verified) >= 12 and total == 14 and documented and monotone
    record(9, "degenerations", ok,
           f"2D closure facts verified: {ok_closure}; diagram arrows verified {len(verified)}/14; "
           f"unrealized with obstruction: {[(d['target'], d['source'], d['obstruction']) for d in unrealized]}; "
           f"orbit dimension drops on every verified family: {monotone}")


def test_criterion_10_tori(cat):
    failures = []
    counts = {"T3": 0, "T2": 0}
    for name, fam in sorted(cat.tori.items()):
        counts[fam.group] += 1
        gen = rng.generator("acceptance-integral:" + name)
        integral = all(descends_to_torus(fam.element([gen.randint(-5, 5) for _ in fam.params]))
                       for _ in range(200))
        checks = {
            "closure": closure_check(fam, 200).ok,
            "inverse/identity": inverse_identity_check(fam, 200).ok,
            "integral": integral,
            "free": freeness_check(fam, 200).ok,
        }
        failures += [f"{name} {k}" for k, v in checks.items() if not v]
    ok = not failures and counts == {"T3": 7, "T2": 2}
    record(10, "torus groups", ok, f"counts T3 {counts['T3']}, T2 {counts['T2']}; failures {failures or 'none'}")


def test_criterion_11_heisenberg():
    prod, bracket = heisenberg_example(a=1)
    identity = check_left_symmetric(prod, bracket).ok
    complete = is_complete(prod).complete
    record(11, "Heisenberg negative control", identity and not complete,
           f"left-symmetric identities hold: {identity}; complete: {complete}")


def test_criterion_12_determinism(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"report{k}.json"
        proc = subprocess.run([sys.executable, "-m", "abelaffine.cli", "report", "--out", str(path)],
                              capture_output=True, text=True)
        outs.append((proc.returncode, path.read_bytes()))
    same = outs[0][1] == outs[1][1]
    record(12, "report determinism", same and outs[0][0] == 0,
           f"two runs byte-identical: {same} ({len(outs[0][1])} bytes), exit status {outs[0][0]}")
