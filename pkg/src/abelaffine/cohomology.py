"""Degree-2 symmetric (Harrison) and Hochschild cohomology of commutative associative algebras."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from itertools import product
from typing import Mapping, Sequence

from .algebra import Algebra, BilinearProduct, basis, check_associative, check_commutative, multiply
from .exact import RatMatrix, complement_basis, nullspace, row_space_basis, span_dim, to_fraction, vec


def symmetric_pairs(n: int) -> list:
    return [(i, j) for i in range(n) for j in range(i, n)]


@dataclass(frozen=True)
class SymmetricCochain:
    """A symmetric bilinear map V x V -> V; ``coords[(i, j)]`` (0-based, i <= j) is phi(e_i, e_j)."""

    dim: int
    coords: tuple  # flat: pair-major, then output coordinate

    def __post_init__(self):
        n = self.dim
        c = vec(self.coords)
        if len(c) != n * n * (n + 1) // 2:
            raise ValueError("symmetric cochain coordinate count must be n*n(n+1)/2")
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_values(cls, dim: int, values: Mapping[tuple, Mapping[int, object]]) -> "SymmetricCochain":
        """From 1-based ``{(i, j): {k: coefficient}}``; (i, j) and (j, i) name the same slot."""
        pairs = symmetric_pairs(dim)
        flat = [Fraction(0)] * (len(pairs) * dim)
        for (i, j), coeffs in values.items():
            a, b = sorted((i - 1, j - 1))
            base = pairs.index((a, b)) * dim
            for k, v in coeffs.items():
                flat[base + k - 1] += to_fraction(v)
        return cls(dim, tuple(flat))

    @classmethod
    def from_function(cls, dim: int, phi) -> "SymmetricCochain":
        e = basis(dim)
        flat = []
        for i, j in symmetric_pairs(dim):
            flat.extend(phi(e[i], e[j]))
        return cls(dim, tuple(flat))

    def value(self, i: int, j: int) -> tuple:
        a, b = sorted((i, j))
        n = self.dim
        base = symmetric_pairs(n).index((a, b)) * n
        return self.coords[base:base + n]

    def __call__(self, x: Sequence, y: Sequence) -> tuple:
        n = self.dim
        x, y = vec(x), vec(y)
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                s = x[i] * y[j]
                for k, v in enumerate(self.value(i, j)):
                    out[k] += s * v
        return tuple(out)

    def nonzero_values(self) -> dict:
        """1-based ``{(i, j): {k: coefficient}}`` over i <= j."""
        out = {}
        for i, j in symmetric_pairs(self.dim):
            v = self.value(i, j)
            if any(v):
                out[(i + 1, j + 1)] = {k + 1: x for k, x in enumerate(v) if x}
        return out


def _check_dims(a: BilinearProduct, n: int):
    if a.dim != n:
        raise ValueError(f"dimension mismatch: algebra {a.dim}, cochain {n}")


def coboundary2(a: BilinearProduct, phi) -> dict:
    """delta phi(e_i, e_j, e_k) for all triples, keyed 0-based.

    delta phi(x,y,z) = mu(x, phi(y,z)) - phi(mu(x,y), z) - mu(phi(x,y), z) + phi(x, mu(y,z)).
    ``phi`` is any callable bilinear map (a :class:`SymmetricCochain` or a general cochain).
    """
    n = a.dim
    if isinstance(phi, SymmetricCochain):
        _check_dims(a, phi.dim)
    e = basis(n)
    out = {}
    for i, j, k in product(range(n), repeat=3):
        t1 = multiply(a, e[i], phi(e[j], e[k]))
        t2 = phi(a.c[i][j], e[k])
        t3 = multiply(a, phi(e[i], e[j]), e[k])
        t4 = phi(e[i], a.c[j][k])
        out[(i, j, k)] = tuple(w - x - y + z for w, x, y, z in zip(t1, t2, t3, t4))
    return out


def is_cocycle(a: BilinearProduct, phi) -> bool:
    return not any(any(v) for v in coboundary2(a, phi).values())


def coboundary1(a: BilinearProduct, f) -> SymmetricCochain:
    """(delta f)(x, y) = mu(x, f y) - f(mu(x, y)) + mu(f x, y) for a commutative product."""
    f = RatMatrix.coerce(f)
    n = a.dim
    if (f.rows, f.cols) != (n, n):
        raise ValueError("endomorphism has the wrong size")
    e = basis(n)

    def value(x, y):
        t1 = multiply(a, x, f @ y)
        t2 = f @ multiply(a, x, y)
        t3 = multiply(a, f @ x, y)
        return tuple(p - q + r for p, q, r in zip(t1, t2, t3))

    for i, j in product(range(n), repeat=2):
        if value(e[i], e[j]) != value(e[j], e[i]):
            raise ValueError(f"coboundary of f is not symmetric at ({i + 1},{j + 1}); product not commutative?")
    return SymmetricCochain.from_function(n, value)


def _symmetric_cochain_basis(n: int) -> list:
    size = n * n * (n + 1) // 2
    return [SymmetricCochain(n, tuple(Fraction(int(p == q)) for q in range(size))) for p in range(size)]


def _flatten(values: dict) -> list:
    return [x for key in sorted(values) for x in values[key]]


def cocycle_matrix(a: BilinearProduct) -> RatMatrix:
    """Columns: delta of each symmetric basis cochain, flattened over (i,j,k,s)."""
    cols = [_flatten(coboundary2(a, phi)) for phi in _symmetric_cochain_basis(a.dim)]
    return RatMatrix.from_columns(cols)


def coboundary_vectors(a: BilinearProduct) -> list:
    n = a.dim
    out = []
    for r, s in product(range(n), repeat=2):
        f = RatMatrix(n, n, tuple(Fraction(int(p == r * n + s)) for p in range(n * n)))
        out.append(coboundary1(a, f).coords)
    return out


@dataclass(frozen=True)
class H2Result:
    dim_z: int
    dim_b: int
    representatives: tuple  # SymmetricCochain values spanning a complement of B in Z

    @property
    def dim_h(self) -> int:
        return self.dim_z - self.dim_b

    def __iter__(self):
        yield from (self.dim_z, self.dim_b, self.dim_h, self.representatives)


def cocycle_basis(a: BilinearProduct) -> list:
    return row_space_basis(nullspace(cocycle_matrix(a)))


def coboundary_basis(a: BilinearProduct) -> list:
    return row_space_basis(coboundary_vectors(a))


@lru_cache(maxsize=512)
def h2s(a: Algebra) -> H2Result:
    """Z_s^2, B_s^2 and a canonical complement of B in Z."""
    if not check_commutative(a):
        raise ValueError(f"{a.name}: symmetric cohomology needs a commutative product")
    z = cocycle_basis(a)
    b = coboundary_basis(a)
    n = a.dim
    reps = tuple(SymmetricCochain(n, v) for v in complement_basis(b, z))
    if len(b) + len(reps) != len(z):
        raise ArithmeticError(f"{a.name}: coboundaries are not contained in cocycles")
    return H2Result(len(z), len(b), reps)


def independent_mod_coboundaries(a: Algebra, cochains: Sequence[SymmetricCochain]) -> int:
    """Rank of the classes of ``cochains`` in Z_s^2 / B_s^2."""
    b = coboundary_basis(a)
    return span_dim(b + [c.coords for c in cochains]) - len(b)


# ---------------------------------------------------------------------------
# full Hochschild H^2
# ---------------------------------------------------------------------------


class BilinearCochain:
    """General bilinear map given by a flat coordinate vector over (i, j, k)."""

    def __init__(self, dim: int, coords: Sequence):
        self.dim = dim
        self.coords = vec(coords)

    def __call__(self, x, y):
        n = self.dim
        x, y = vec(x), vec(y)
        out = [Fraction(0)] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                s = x[i] * y[j]
                base = (i * n + j) * n
                for k in range(n):
                    out[k] += s * self.coords[base + k]
        return tuple(out)


def hochschild_h2(a: BilinearProduct) -> int:
    """dim H^2(a, a) over all bilinear cochains.

    delta phi(x,y,z) = mu(x,phi(y,z)) - phi(mu(x,y),z) + phi(x,mu(y,z)) - mu(phi(x,y),z);
    coboundaries delta f(x,y) = mu(x, f y) - f(mu(x,y)) + mu(f x, y).
    """
    if not check_associative(a):
        raise ValueError(f"{a.name}: Hochschild cohomology needs an associative product")
    n = a.dim
    size = n ** 3
    cols = []
    for p in range(size):
        phi = BilinearCochain(n, [int(q == p) for q in range(size)])
        cols.append(_flatten(coboundary2(a, phi)))
    dim_z = len(nullspace(RatMatrix.from_columns(cols)))
    e = basis(n)
    bvecs = []
    for r, s in product(range(n), repeat=2):
        f = RatMatrix(n, n, tuple(Fraction(int(q == r * n + s)) for q in range(n * n)))
        v = []
        for i, j in product(range(n), repeat=2):
            t1 = multiply(a, e[i], f @ e[j])
            t2 = f @ a.c[i][j]
            t3 = multiply(a, f @ e[i], e[j])
            v.extend(p - q + w for p, q, w in zip(t1, t2, t3))
        bvecs.append(v)
    return dim_z - span_dim(bvecs)
