"""Independent reference computations with sympy.

Nothing here calls the package's linear algebra; the algebras are only read
through their structure tensors.
"""
from itertools import product

import sympy as sp


def tensor(a):
    n = a.dim
    return [[[sp.Rational(a.c[i][j][k].numerator, a.c[i][j][k].denominator) for k in range(n)]
             for j in range(n)] for i in range(n)]


def _mul(c, x, y):
    n = len(c)
    return [sum(x[i] * y[j] * c[i][j][k] for i in range(n) for j in range(n)) for k in range(n)]


def _basis(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _linear_rank(exprs, unknowns):
    if not exprs:
        return 0
    m = sp.Matrix([[sp.diff(e, u) for u in unknowns] for e in exprs])
    return m.rank()


def der_dim(a):
    c, n = tensor(a), a.dim
    d = sp.Matrix(n, n, sp.symbols(f"d0:{n * n}"))
    e = _basis(n)
    eqs = []
    for i, j in product(range(n), repeat=2):
        lhs = d * sp.Matrix(_mul(c, e[i], e[j]))
        rhs = sp.Matrix(_mul(c, list(d * sp.Matrix(e[i])), e[j])) + sp.Matrix(_mul(c, e[i], list(d * sp.Matrix(e[j]))))
        eqs.extend(lhs - rhs)
    return n * n - _linear_rank([sp.expand(x) for x in eqs], list(d))


def h2s_dims(a):
    """(dim Z_s^2, dim B_s^2) from the cocycle equations and the coboundary map."""
    c, n = tensor(a), a.dim
    pairs = [(i, j) for i in range(n) for j in range(i, n)]
    syms = {(i, j, k): sp.Symbol(f"p{i}{j}{k}") for (i, j) in pairs for k in range(n)}

    def phi(x, y):
        return [sum(x[i] * y[j] * syms[(min(i, j), max(i, j), k)] for i in range(n) for j in range(n))
                for k in range(n)]

    e = _basis(n)
    eqs = []
    for i, j, k in product(range(n), repeat=3):
        t1 = _mul(c, e[i], phi(e[j], e[k]))
        t2 = phi(_mul(c, e[i], e[j]), e[k])
        t3 = _mul(c, phi(e[i], e[j]), e[k])
        t4 = phi(e[i], _mul(c, e[j], e[k]))
        eqs.extend(sp.expand(w - x - y + z) for w, x, y, z in zip(t1, t2, t3, t4))
    unknowns = list(syms.values())
    dim_z = len(unknowns) - _linear_rank(eqs, unknowns)
    f = sp.Matrix(n, n, sp.symbols(f"f0:{n * n}"))
    images = []
    for (i, j) in pairs:
        fy = list(f * sp.Matrix(e[j]))
        fx = list(f * sp.Matrix(e[i]))
        v = sp.Matrix(_mul(c, e[i], fy)) - f * sp.Matrix(_mul(c, e[i], e[j])) + sp.Matrix(_mul(c, fx, e[j]))
        images.extend(sp.expand(x) for x in v)
    dim_b = _linear_rank(images, list(f))
    return dim_z, dim_b


def nil_radical_dim(a, box=2):
    """Dimension of the span of nilpotent elements among small integer vectors."""
    c, n = tensor(a), a.dim
    found = []
    for x in product(range(-box, box + 1), repeat=n):
        lx = sp.Matrix([[sum(x[i] * c[i][j][k] for i in range(n)) for j in range(n)] for k in range(n)])
        if (lx ** n).is_zero_matrix:
            found.append(list(x))
    return sp.Matrix(found).rank() if found else 0


def descartes_signature(rows):
    """(positive, negative, zero) eigenvalue counts of a symmetric matrix via Descartes' rule.

    All roots of the characteristic polynomial are real, so sign changes count them exactly.
    """
    m = sp.Matrix(rows)
    x = sp.Symbol("x")
    p = sp.Poly(m.charpoly(x).as_expr(), x)
    zeros = 0
    while p.eval(0) == 0 and p.degree() > 0:
        p = sp.Poly(sp.cancel(p.as_expr() / x), x)
        zeros += 1

    def changes(poly):
        signs = [sp.sign(co) for co in poly.all_coeffs() if co != 0]
        return sum(1 for u, v in zip(signs, signs[1:]) if u != v)

    pos = changes(p)
    neg = changes(sp.Poly(p.as_expr().subs(x, -x), x))
    return pos, neg, zeros
