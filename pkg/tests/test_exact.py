from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from abelaffine.exact import (
    Poly,
    RatFunction,
    RatMatrix,
    charpoly,
    count_real_roots,
    format_ratfun,
    nullspace,
    parse_ratfun,
    rank,
    rank_nullspace,
    signature_symmetric,
    solve_linear,
    to_fraction,
)
from abelaffine.algebra import trace_form
from oracles import descartes_signature

small = st.integers(-4, 4)


def matrices(rows, cols):
    return st.lists(st.lists(small, min_size=cols, max_size=cols), min_size=rows, max_size=rows)


def test_rank_nullspace_examples():
    assert rank_nullspace(RatMatrix.identity(3)) == (3, [])
    r, basis = rank_nullspace(RatMatrix.zeros(2, 3))
    assert r == 0 and sorted(basis, reverse=True) == [(1, 0, 0), (0, 1, 0), (0, 0, 1)]
    r, basis = rank_nullspace([[1, 2], [2, 4]])
    assert r == 1 and basis == [(Fraction(-2), Fraction(1))]


def test_solve_linear_examples():
    assert solve_linear(RatMatrix.identity(2), [3, Fraction(1, 2)]) == (3, Fraction(1, 2))
    assert solve_linear([[1, 1]], [2]) == (2, 0)
    assert solve_linear([[0]], [1]) is None


def test_signature_examples(cat):
    assert signature_symmetric([[1, 0, 0], [0, 1, 0], [0, 0, 0]]) == (2, 0, 1)
    assert signature_symmetric([[2, 0, 0], [0, -2, 0], [0, 0, 0]]) == (1, 1, 1)
    assert signature_symmetric(trace_form(cat.algebra("mu7_3d"))) == (1, 1, 1)
    with pytest.raises(ValueError):
        signature_symmetric([[0, 1], [0, 0]])


@settings(max_examples=60, deadline=None)
@given(matrices(3, 4))
def test_rank_and_nullspace_against_sympy(rows):
    m = sp.Matrix(rows)
    assert rank(rows) == m.rank()
    basis = nullspace(rows)
    assert len(basis) == 4 - m.rank()
    for v in basis:
        assert all(sum(a * x for a, x in zip(r, v)) == 0 for r in rows)


@settings(max_examples=60, deadline=None)
@given(matrices(3, 3))
def test_signature_against_descartes(rows):
    sym = [[rows[i][j] + rows[j][i] for j in range(3)] for i in range(3)]
    assert signature_symmetric(sym) == descartes_signature(sym)


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3))
def test_charpoly_against_sympy(rows):
    x = sp.Symbol("x")
    ref = sp.Poly(sp.Matrix(rows).charpoly(x).as_expr(), x).all_coeffs()[::-1]
    assert list(charpoly(rows).coeffs) == [Fraction(int(c)) for c in ref]


@settings(max_examples=40, deadline=None)
@given(matrices(3, 3))
def test_inverse_roundtrip(rows):
    m = RatMatrix.from_rows(rows)
    if m.det() == 0:
        with pytest.raises(Exception):
            m.inverse()
    else:
        assert m @ m.inverse() == RatMatrix.identity(3)


def test_count_real_roots():
    # (x - 1)(x - 2)(x + 3)(x^2 + 1)
    p = Poly([-1, 1]) * Poly([-2, 1]) * Poly([3, 1]) * Poly([1, 0, 1])
    assert count_real_roots(p) == (1, 2)


def test_ratfun_parse_and_format():
    f = parse_ratfun("(1 + t)/t^3")
    assert f.has_pole_at(0) and not parse_ratfun("t^2 - 1/2").has_pole_at(0)
    assert parse_ratfun("t^-1") * parse_ratfun("t") == RatFunction(1)
    for text in ("t^2 - 1/2", "(1 + t)/t^3", "3*t", "0"):
        assert parse_ratfun(format_ratfun(parse_ratfun(text))) == parse_ratfun(text)
    assert parse_ratfun("t^2/2")(Fraction(2)) == 2
    with pytest.raises(ValueError):
        parse_ratfun("0.5*t")


def test_to_fraction():
    assert to_fraction("3/4") == Fraction(3, 4)
    assert to_fraction(2) == 2
    with pytest.raises(TypeError):
        to_fraction(0.5)
