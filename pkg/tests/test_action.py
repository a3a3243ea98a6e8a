import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abelaffine.action import (
    AffineMap,
    compare_closed_form,
    exp_action,
    expm_numeric,
    group_law_check,
    rep_matrix,
    translation_image_sample,
)
from abelaffine.catalog import heisenberg_example

ACTIONS_2D = [f"A{i}_2d" for i in range(1, 7)]
ACTIONS_3D = [f"A{i}_3d" for i in range(1, 16)]


def test_rep_matrix(cat):
    a, b = Fraction(3), Fraction(-2)
    assert rep_matrix(cat.algebra("mu4_2d"), (a, b)).to_rows() == [[0, 0, a], [a, 0, b], [0, 0, 0]]
    assert rep_matrix(cat.algebra("mu4_2d"), (0, 0)).is_zero()
    c = Fraction(5)
    m = rep_matrix(cat.algebra("mu14_3d"), (a, b, c)).to_rows()
    assert [r[:3] for r in m[:3]] == [[0, 0, 0], [a, 0, 0], [b, a, 0]]
    assert [r[3] for r in m[:3]] == [a, b, c]


def test_exp_action_examples(cat):
    a, b = Fraction(3, 2), Fraction(-1, 3)
    m = exp_action(cat.algebra("mu4_2d"), (a, b))
    assert m.is_exact
    assert m.linear == ((1, 0), (a, 1)) and m.translation == (a, a * a / 2 + b)
    assert exp_action(cat.algebra("mu3_3d"), (0, 0, 0)).max_deviation(AffineMap.identity(3))[0] < 1e-15
    x = 0.7
    m = exp_action(cat.algebra("mu1_2d"), (x, 0.0))
    ref = AffineMap(((math.exp(x), 0.0), (0.0, math.exp(x))), (math.exp(x) - 1, 0.0))
    assert m.max_deviation(ref)[0] < 1e-12


def test_affine_map_algebra():
    f = AffineMap(((Fraction(1), Fraction(2)), (Fraction(0), Fraction(1))), (Fraction(1), Fraction(-1)))
    assert (f @ f.inverse()).is_identity()
    assert f.apply((0, 0)) == (1, -1)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=9, max_size=9))
def test_expm_against_mpmath(entries):
    m = np.array(entries).reshape(3, 3)
    ref = np.array(mpmath.expm(mpmath.matrix(m.tolist())).tolist(), dtype=float)
    assert np.allclose(expm_numeric(m), ref, rtol=1e-11, atol=1e-11)


@pytest.mark.parametrize("name", ACTIONS_2D + ACTIONS_3D)
def test_closed_forms(cat, name):
    act = cat.action(name)
    alg = cat.algebra(act.algebra)
    res = compare_closed_form(alg, act, trials=100, tol=1e-9)
    fixes = cat.errata_for(name, "action")
    if fixes:
        assert not res, "an erratum is recorded but the printed form matches"
        assert compare_closed_form(alg, cat.corrected_action(name), trials=100, tol=1e-9)
    else:
        assert res, (name, res)


def test_a10_erratum(cat):
    act = cat.action("A10_3d")
    alg = cat.algebra("mu10_3d")
    res = compare_closed_form(alg, act)
    assert not res and res.failing_entry is not None
    assert cat.corrected_action("A10_3d").components[2] == "b*y + z + b^2/2 + c"
    assert compare_closed_form(alg, cat.corrected_action("A10_3d"))


@pytest.mark.parametrize("name", ["A4_2d", "A1_3d", "A13_3d"])
def test_zero_params_is_identity(cat, name):
    act = cat.action(name)
    got = act.evaluate([0.0] * len(act.params))
    assert got.max_deviation(AffineMap.identity(act.dim, exact=False))[0] == 0


def test_group_law(cat):
    assert group_law_check(cat.algebra("mu14_3d"))
    prod, _ = heisenberg_example(a=1)
    bad = group_law_check(prod)
    assert not bad and "commute" in bad.detail


def test_translation_images(cat):
    a1 = translation_image_sample(cat.algebra("mu1_2d"), {"kind": "half_plane", "coord": 1, "bound": "-1"})
    assert a1 and a1.evidence["min_coord"] < -0.99
    a5 = translation_image_sample(cat.algebra("mu5_2d"), {"kind": "all"})
    assert a5
    mu3 = cat.algebra("mu3_2d")
    printed = translation_image_sample(mu3, {"kind": "puncture", "point": ["1", "0"]})
    assert not printed
    corrected = translation_image_sample(mu3, {"kind": "puncture", "point": ["-1", "0"]})
    assert corrected
    # the printed puncture is hit exactly: exp(a + ib) - 1 = 1 at (ln 2, 0)
    hit = exp_action(mu3, (math.log(2), 0.0)).translation
    assert abs(hit[0] - 1) < 1e-12 and abs(hit[1]) < 1e-12
