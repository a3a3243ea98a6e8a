from fractions import Fraction

import pytest

from abelaffine.action import AffineMap, exp_action
from abelaffine.lattice import (
    Poly,
    abelian_check,
    closure_check,
    commute,
    composition_law,
    descends_to_torus,
    fixed_point_set,
    freeness_check,
    inverse_identity_check,
    parse_poly,
    source_action_check,
)

GAMMAS = [f"Gamma{i}" for i in range(1, 8)]
ALL = GAMMAS + ["T2_A4", "T2_A5"]


def test_poly_basics():
    p, q = Poly.var("p"), Poly.var("q")
    f = parse_poly("p + q^2/2", ["p", "q"])
    assert f == p + q * q / 2
    assert f({"p": 1, "q": 2}) == 3
    assert f.subs({"q": p}) == p + p * p / 2
    assert f.degree_in("q") == 2 and f.coefficient("q", 2) == Poly.const(Fraction(1, 2))


def test_element_examples(cat):
    g6 = cat.torus("Gamma6").element((1, 2, 3))
    assert g6.linear == ((1, 0, 0), (1, 1, 0), (2, 1, 1)) and g6.translation == (1, 2, 3)
    for name in ALL:
        fam = cat.torus(name)
        assert fam.element([0] * fam.param_count).is_identity()
    g7 = cat.torus("Gamma7").element((4, -1, 2))
    assert g7.linear == AffineMap.identity(3).linear and g7.translation == (4, -1, 2)


@pytest.mark.parametrize("name", ALL)
def test_group_axioms(cat, name):
    fam = cat.torus(name)
    assert closure_check(fam, 200)
    assert inverse_identity_check(fam, 200)
    assert freeness_check(fam, 200)
    alg = cat.algebra(cat.action(fam.source_action).algebra)
    assert source_action_check(fam, alg)


def test_gamma1_laws(cat):
    fam = cat.torus("Gamma1")
    law = composition_law(fam)
    p, q, p2, q2 = (Poly.var(v) for v in ("p", "q", "p'", "q'"))
    assert law["p"] == p + p2 + q * q2 and law["q"] == q + q2
    inv = inverse_identity_check(fam).law
    assert inv == {"p^-1": repr(q * q - p), "q^-1": repr(-q)}


def test_gamma7_inverse(cat):
    fam = cat.torus("Gamma7")
    assert closure_check(fam).law == {"p''": "p + p'", "q''": "q + q'", "r''": "r + r'"}
    x = fam.element((2, -3, 5))
    assert (x @ fam.element((-2, 3, -5))).is_identity()


def test_corrupted_gamma6_fails(cat):
    bad = cat.torus("Gamma6").with_entry(3, 1, "q^2")
    res = closure_check(bad, 200)
    assert not res and res.witness is not None


def test_freeness_details(cat):
    g3 = cat.torus("Gamma3")
    for x in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (2, -1, 3)]:
        assert fixed_point_set(g3.element(x)) is None
    g1 = cat.torus("Gamma1")
    res = freeness_check(g1)
    assert res and res.fixed_outside > 0
    x0, dirs = fixed_point_set(g1.element((0, 2)))
    assert x0[0] == -1 and all(d[0] == 0 for d in dirs)


def test_descends_to_torus(cat):
    m = exp_action(cat.algebra("mu13_3d"), (1, 0, 0))
    assert m.linear == ((1, 0, 0), (1, 1, 0), (0, 0, 1)) and descends_to_torus(m)
    assert not descends_to_torus(exp_action(cat.algebra("mu1_3d"), (0.3, 0.0, 0.0)))
    assert descends_to_torus(AffineMap.identity(3))
    assert not descends_to_torus(AffineMap(((Fraction(1, 2),),), (Fraction(0),)))


@pytest.mark.parametrize("name", ALL)
def test_families_commute(cat, name):
    # images of exp on a commutative law, so every pair commutes
    fam = cat.torus(name)
    assert abelian_check(fam, 100)
    k = fam.param_count
    units = [tuple(int(i == j) for j in range(k)) for i in range(k)]
    assert all(commute(fam, u, v) for u in units for v in units)


def test_counts(cat):
    groups = [fam.group for fam in cat.tori.values()]
    assert groups.count("T3") == 7 and groups.count("T2") == 2
