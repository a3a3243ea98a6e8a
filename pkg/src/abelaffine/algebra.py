"""Structure-constant algebras and their linear-algebraic invariants.

A product on Q^n is stored as ``c[i][j][k]`` with
``mu(e_i, e_j) = sum_k c[i][j][k] e_k``.  Internally indices are 0-based;
anything reported back to a person (failing triples, file formats) is 1-based.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Mapping, Optional, Sequence

from . import rng as _rng
from .exact import (
    Poly,
    RatMatrix,
    charpoly,
    complement_basis,
    nullspace,
    row_space_basis,
    signature_symmetric,
    solve_linear,
    to_fraction,
    unit_vector,
    vec,
)


class ConsistencyError(ArithmeticError):
    """Two routes that must agree on a mathematical fact disagreed."""


def _zero_tensor(n: int) -> list:
    return [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]


def _freeze(t) -> tuple:
    return tuple(tuple(tuple(to_fraction(x) for x in row) for row in plane) for plane in t)


@dataclass(frozen=True)
class BilinearProduct:
    """A bilinear product on Q^n given by structure constants."""

    dim: int
    c: tuple
    name: str = ""

    def __post_init__(self):
        c = _freeze(self.c)
        n = self.dim
        if len(c) != n or any(len(p) != n or any(len(r) != n for r in p) for p in c):
            raise ValueError(f"structure tensor of {self.name or 'product'} must be {n}x{n}x{n}")
        object.__setattr__(self, "c", c)

    def product_vector(self, i: int, j: int) -> tuple:
        return self.c[i][j]

    def nonzero_products(self):
        n = self.dim
        for i, j in product(range(n), repeat=2):
            if any(self.c[i][j]):
                yield i, j, self.c[i][j]

    def is_zero(self) -> bool:
        return not any(any(v) for _, _, v in self.nonzero_products())


@dataclass(frozen=True)
class Algebra(BilinearProduct):
    """A product flagged commutative or not; commutative ones must be symmetric."""

    commutative: bool = True

    def __post_init__(self):
        super().__post_init__()
        if self.commutative:
            bad = check_commutative(self)
            if not bad:
                raise ValueError(f"{self.name}: flagged commutative but c{bad.witness} is asymmetric")

    @classmethod
    def from_products(
        cls,
        name: str,
        dim: int,
        products: Mapping[tuple, Mapping[int, object]],
        commutative: bool = True,
    ) -> "Algebra":
        """Build from 1-based ``{(i, j): {k: coefficient}}``; commutative input is symmetrized."""
        t = _zero_tensor(dim)
        for (i, j), coeffs in products.items():
            for k, v in coeffs.items():
                t[i - 1][j - 1][k - 1] = to_fraction(v)
                if commutative:
                    t[j - 1][i - 1][k - 1] = to_fraction(v)
        return cls(dim, t, name, commutative)

    @classmethod
    def zero(cls, dim: int, name: str = "") -> "Algebra":
        return cls(dim, _zero_tensor(dim), name or f"zero{dim}", True)

    def renamed(self, name: str) -> "Algebra":
        return Algebra(self.dim, self.c, name, self.commutative)


@dataclass(frozen=True)
class Check:
    """Outcome of an identity check; truthy on pass."""

    ok: bool
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


PASS = Check(True)


# ---------------------------------------------------------------------------
# products and multiplication operators
# ---------------------------------------------------------------------------


def multiply(a: BilinearProduct, x: Sequence, y: Sequence) -> tuple:
    x, y = vec(x), vec(y)
    n = a.dim
    if len(x) != n or len(y) != n:
        raise ValueError(f"vectors must have length {n}")
    out = [Fraction(0)] * n
    for i in range(n):
        if not x[i]:
            continue
        for j in range(n):
            if not y[j]:
                continue
            s = x[i] * y[j]
            for k, v in enumerate(a.c[i][j]):
                if v:
                    out[k] += s * v
    return tuple(out)


def left_mult_matrix(a: BilinearProduct, x: Sequence) -> RatMatrix:
    """Matrix of Y -> mu(x, Y)."""
    n = a.dim
    return RatMatrix.from_columns([multiply(a, x, unit_vector(n, j)) for j in range(n)], n)


def right_mult_matrix(a: BilinearProduct, x: Sequence) -> RatMatrix:
    """Matrix of Y -> mu(Y, x)."""
    n = a.dim
    return RatMatrix.from_columns([multiply(a, unit_vector(n, j), x) for j in range(n)], n)


def basis(n: int) -> list:
    return [unit_vector(n, i) for i in range(n)]


# ---------------------------------------------------------------------------
# axioms
# ---------------------------------------------------------------------------


def check_associative(a: BilinearProduct) -> Check:
    """First (i, j, k, s), 1-based, where e_i(e_j e_k) - (e_i e_j)e_k has nonzero s-th coordinate."""
    n = a.dim
    e = basis(n)
    for i, j, k in product(range(n), repeat=3):
        left = multiply(a, e[i], a.c[j][k])
        right = multiply(a, a.c[i][j], e[k])
        for s in range(n):
            if left[s] != right[s]:
                return Check(False, (i + 1, j + 1, k + 1, s + 1), f"associator = {left[s] - right[s]}")
    return PASS


def check_commutative(a: BilinearProduct) -> Check:
    n = a.dim
    for i, j in product(range(n), repeat=2):
        if a.c[i][j] != a.c[j][i]:
            return Check(False, (i + 1, j + 1))
    return PASS


def check_left_symmetric(p: BilinearProduct, bracket) -> Check:
    """Check X.Y - Y.X = [X,Y] (identity 2) and the left-symmetric identity (identity 1).

    ``bracket`` is a structure tensor; a failure reports which identity broke
    and the 1-based basis pair or triple.
    """
    n = p.dim
    br = BilinearProduct(n, bracket, "bracket")
    for i, j in product(range(n), repeat=2):
        if br.c[i][j] != tuple(-x for x in br.c[j][i]):
            raise ValueError(f"bracket is not antisymmetric at ({i + 1},{j + 1})")
    e = basis(n)
    for i, j in product(range(n), repeat=2):
        lhs = tuple(u - v for u, v in zip(p.c[i][j], p.c[j][i]))
        if lhs != br.c[i][j]:
            return Check(False, ("identity 2", (i + 1, j + 1)), f"X.Y - Y.X = {lhs}, bracket = {br.c[i][j]}")
    for i, j, k in product(range(n), repeat=3):
        lhs = [u - v for u, v in zip(multiply(p, e[i], p.c[j][k]), multiply(p, e[j], p.c[i][k]))]
        rhs = [u - v for u, v in zip(multiply(p, p.c[i][j], e[k]), multiply(p, p.c[j][i], e[k]))]
        if lhs != rhs:
            return Check(False, ("identity 1", (i + 1, j + 1, k + 1)))
    return PASS


# ---------------------------------------------------------------------------
# unit, completeness
# ---------------------------------------------------------------------------


def find_unit(a: BilinearProduct) -> Optional[tuple]:
    """The two-sided unit, solving L_e = I and R_e = I; ``None`` if there is none."""
    n = a.dim
    rows, rhs = [], []
    for j in range(n):
        for k in range(n):
            # coordinate k of mu(e, e_j) and mu(e_j, e) as linear forms in e
            rows.append([a.c[i][j][k] for i in range(n)])
            rhs.append(Fraction(int(j == k)))
            rows.append([a.c[j][i][k] for i in range(n)])
            rhs.append(Fraction(int(j == k)))
    sol = solve_linear(rows, rhs)
    if sol is None:
        return None
    if nullspace(rows):
        raise ConsistencyError(f"{a.name}: unit is not unique")
    return sol


@dataclass(frozen=True)
class Completeness:
    complete: bool
    witness: Optional[tuple] = None

    def __bool__(self):
        return self.complete


def _is_nilpotent_matrix(m: RatMatrix) -> bool:
    return charpoly(m) == Poly.monomial(m.rows)


def is_complete(a: BilinearProduct, random_checks: int = 10) -> Completeness:
    """Completeness via tr(R_X) = 0 on a basis, cross-checked by nilpotency of R_X."""
    n = a.dim
    witness = None
    for x in basis(n):
        if right_mult_matrix(a, x).trace() != 0:
            witness = x
            break
    complete = witness is None
    if complete:
        gen = _rng.generator(f"complete:{a.name}")
        probes = basis(n) + [_rng.rational_vector(gen, n) for _ in range(random_checks)]
        for x in probes:
            if not _is_nilpotent_matrix(right_mult_matrix(a, x)):
                raise ConsistencyError(f"{a.name}: traces vanish but R_{x} is not nilpotent")
    return Completeness(complete, witness)


# ---------------------------------------------------------------------------
# subspaces and filtrations
# ---------------------------------------------------------------------------


def annihilator(a: BilinearProduct) -> list:
    """Echelon basis of {x : x e_i = e_i x = 0 for all i}."""
    n = a.dim
    rows = []
    for j in range(n):
        for k in range(n):
            rows.append([a.c[i][j][k] for i in range(n)])
            rows.append([a.c[j][i][k] for i in range(n)])
    return row_space_basis(nullspace(rows))


def products_span(a: BilinearProduct, xs: Sequence, ys: Sequence) -> list:
    return row_space_basis([multiply(a, x, y) for x in xs for y in ys])


@dataclass(frozen=True)
class Filtration:
    dims: tuple
    nilpotency_index: Optional[int]  # None: not nilpotent

    @property
    def nilpotent(self) -> bool:
        return self.nilpotency_index is not None


def power_filtration(a: BilinearProduct) -> Filtration:
    """Dimensions of A^1 = A, A^{k+1} = A^k A, until zero or stable.

    The nilpotency index is the least k with A^k = 0, so the zero algebra
    has index 2.
    """
    e = basis(a.dim)
    current = row_space_basis(e)
    dims = [len(current)]
    while True:
        nxt = products_span(a, current, e)
        dims.append(len(nxt))
        if not nxt:
            return Filtration(tuple(dims), len(dims))
        if len(nxt) == len(current):
            return Filtration(tuple(dims), None)
        current = nxt


def filtration_spaces(a: BilinearProduct, depth: int) -> list:
    """Bases of A^1 ... A^depth."""
    e = basis(a.dim)
    spaces = [row_space_basis(e)]
    while len(spaces) < depth:
        spaces.append(products_span(a, spaces[-1], e) if spaces[-1] else [])
    return spaces


def trace_form(a: BilinearProduct) -> RatMatrix:
    n = a.dim
    ls = [left_mult_matrix(a, x) for x in basis(n)]
    return RatMatrix.from_rows([[(ls[i] @ ls[j]).trace() for j in range(n)] for i in range(n)], n)


def radical(a: Algebra) -> list:
    """Jacobson radical of a commutative associative algebra: the trace-form kernel."""
    return row_space_basis(nullspace(trace_form(a)))


def derivation_system(a: BilinearProduct) -> list:
    """Rows of f(mu(e_i,e_j)) - mu(f e_i, e_j) - mu(e_i, f e_j) = 0 in the unknowns f[r][s]."""
    n = a.dim
    rows = []
    for i, j in product(range(n), repeat=2):
        for k in range(n):
            row = [Fraction(0)] * (n * n)
            # f(mu(e_i,e_j))_k = sum_l f[k][l] c[i][j][l]
            for l in range(n):
                row[k * n + l] += a.c[i][j][l]
            # mu(f e_i, e_j)_k = sum_l f[l][i] c[l][j][k]
            for l in range(n):
                row[l * n + i] -= a.c[l][j][k]
                row[l * n + j] -= a.c[i][l][k]
            rows.append(row)
    return rows


def derivations(a: BilinearProduct) -> list:
    """Basis of Der(a) as matrices (f[r][s] = coordinate r of f(e_s))."""
    n = a.dim
    return [RatMatrix(n, n, v) for v in nullspace(derivation_system(a))]


def orbit_dim(a: BilinearProduct) -> int:
    return a.dim ** 2 - len(derivations(a))


def square_form_signature(a: BilinearProduct) -> Optional[tuple]:
    """Signature, up to overall sign, of the form (x, y) -> mu(x, y) mod A^3 when dim A^2/A^3 = 1.

    This separates real forms that share every dimension count, e.g. the
    nilpotent laws e1^2 = e2, e3^2 = +-e2.  ``None`` when A^2/A^3 is not a line.
    """
    sq, cube = filtration_spaces(a, 3)[1:3]
    if len(sq) - len(cube) != 1:
        return None
    w = complement_basis(cube, sq)[0]
    n = a.dim
    rows = [list(b) for b in cube] + [list(w)]
    lam = solve_linear(rows, [Fraction(0)] * len(cube) + [Fraction(1)])
    form = RatMatrix.from_rows(
        [[sum(l * v for l, v in zip(lam, a.c[i][j])) for j in range(n)] for i in range(n)], n
    )
    p, m, z = signature_symmetric(form)
    return (max(p, m), min(p, m), z)


# ---------------------------------------------------------------------------
# fingerprint
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Fingerprint:
    dim: int
    has_unit: bool
    nilpotency_index: Optional[int]
    dim_square: int
    dim_annihilator: int
    dim_radical: int
    trace_signature: tuple
    dim_derivations: int
    dim_h2s: int
    complete: bool
    square_form_signature: Optional[tuple] = field(default=None)

    def __post_init__(self):
        if self.dim_square > self.dim or self.dim_annihilator > self.dim:
            raise ValueError("subspace dimension exceeds algebra dimension")
        if sum(self.trace_signature) != self.dim:
            raise ValueError("trace signature must sum to the dimension")

    def as_dict(self) -> dict:
        return {
            "dim": self.dim,
            "has_unit": self.has_unit,
            "nilpotency_index": self.nilpotency_index if self.nilpotency_index is not None else "not nilpotent",
            "dim_square": self.dim_square,
            "dim_annihilator": self.dim_annihilator,
            "dim_radical": self.dim_radical,
            "trace_signature": list(self.trace_signature),
            "dim_derivations": self.dim_derivations,
            "dim_h2s": self.dim_h2s,
            "complete": self.complete,
            "square_form_signature": (
                list(self.square_form_signature) if self.square_form_signature is not None else None
            ),
        }


@lru_cache(maxsize=512)
def fingerprint(a: Algebra) -> Fingerprint:
    from .cohomology import h2s

    if not check_associative(a) or not check_commutative(a):
        raise ValueError(f"{a.name}: fingerprint needs a commutative associative algebra")
    filt = power_filtration(a)
    return Fingerprint(
        dim=a.dim,
        has_unit=find_unit(a) is not None,
        nilpotency_index=filt.nilpotency_index,
        dim_square=filt.dims[1],
        dim_annihilator=len(annihilator(a)),
        dim_radical=len(radical(a)),
        trace_signature=signature_symmetric(trace_form(a)),
        dim_derivations=len(derivations(a)),
        dim_h2s=h2s(a).dim_h,
        complete=is_complete(a).complete,
        square_form_signature=square_form_signature(a),
    )
