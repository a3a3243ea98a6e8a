"""Exact scalar and linear-algebra substrate.

Scalars are :class:`fractions.Fraction`.  Matrices are immutable
:class:`RatMatrix` values; polynomials and rational functions in the single
variable ``t`` are :class:`Poly` and :class:`RatFunction`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import zip_longest
from numbers import Rational
from typing import Iterable, Optional, Sequence

Vector = tuple  # tuple of Fraction


def to_fraction(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to :class:`Fraction`."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot convert {x!r} to an exact rational")


def vec(xs: Iterable) -> Vector:
    return tuple(to_fraction(x) for x in xs)


def unit_vector(n: int, i: int) -> Vector:
    return tuple(Fraction(int(k == i)) for k in range(n))


def zero_vector(n: int) -> Vector:
    return (Fraction(0),) * n


# ---------------------------------------------------------------------------
# matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class RatMatrix:
    rows: int
    cols: int
    entries: tuple  # row-major Fractions

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise ValueError("entries length must equal rows*cols")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "RatMatrix":
        rows = [vec(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise ValueError("ragged matrix")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def coerce(cls, m) -> "RatMatrix":
        return m if isinstance(m, RatMatrix) else cls.from_rows(m)

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls.from_rows([unit_vector(n, i) for i in range(n)], n)

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls(rows, cols, (Fraction(0),) * (rows * cols))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: Optional[int] = None) -> "RatMatrix":
        cols = [vec(c) for c in columns]
        if rows is None:
            rows = len(cols[0]) if cols else 0
        return cls.from_rows([[c[i] for c in cols] for i in range(rows)], len(cols))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_rows(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def T(self) -> "RatMatrix":
        return RatMatrix.from_rows([self.column(j) for j in range(self.cols)], self.rows)

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        _same_shape(self, other)
        return RatMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "RatMatrix") -> "RatMatrix":
        _same_shape(self, other)
        return RatMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "RatMatrix":
        return RatMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, s) -> "RatMatrix":
        s = to_fraction(s)
        return RatMatrix(self.rows, self.cols, tuple(s * a for a in self.entries))

    def __matmul__(self, other):
        if isinstance(other, RatMatrix):
            if self.cols != other.rows:
                raise ValueError("shape mismatch in matrix product")
            cols = [other.column(j) for j in range(other.cols)]
            return RatMatrix.from_rows(
                [[_dot(self.row(i), c) for c in cols] for i in range(self.rows)], other.cols
            )
        v = vec(other)
        if len(v) != self.cols:
            raise ValueError("shape mismatch in matrix-vector product")
        return tuple(_dot(self.row(i), v) for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def trace(self) -> Fraction:
        return sum((self[i, i] for i in range(min(self.rows, self.cols))), Fraction(0))

    def det(self) -> Fraction:
        return determinant(self.to_rows())

    def inverse(self) -> "RatMatrix":
        return RatMatrix.from_rows(inverse(self.to_rows()))

    def power(self, k: int) -> "RatMatrix":
        out = RatMatrix.identity(self.rows)
        for _ in range(k):
            out = out @ self
        return out

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in self.row(i)) for i in range(self.rows))
        return f"RatMatrix[{body}]"


def _same_shape(a: RatMatrix, b: RatMatrix):
    if (a.rows, a.cols) != (b.rows, b.cols):
        raise ValueError("shape mismatch")


def _dot(a, b):
    s = Fraction(0)
    for x, y in zip(a, b):
        if x and y:
            s += x * y
    return s


def _rref(rows: list) -> tuple[list, list]:
    """Reduced row echelon form in place; returns (rows, pivot columns)."""
    m = [list(r) for r in rows]
    ncols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def rref(m) -> tuple[RatMatrix, tuple]:
    m = RatMatrix.coerce(m)
    if m.rows == 0:
        return m, ()
    rows, pivots = _rref(m.to_rows())
    return RatMatrix.from_rows(rows, m.cols), tuple(pivots)


def rank(m) -> int:
    return len(rref(m)[1])


def rank_nullspace(m) -> tuple[int, list]:
    """Rank and canonical nullspace basis.

    The basis is read off the reduced echelon form: one vector per free
    column, with a 1 in that column and zeros in the other free columns.
    """
    m = RatMatrix.coerce(m)
    n = m.cols
    if m.rows == 0:
        return 0, [unit_vector(n, j) for j in range(n)]
    rows, pivots = _rref(m.to_rows())
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        basis.append(tuple(v))
    return len(pivots), basis


def nullspace(m) -> list:
    return rank_nullspace(m)[1]


def solve_linear(m, b) -> Optional[Vector]:
    """A solution of ``m x = b`` with free variables set to 0, or ``None``."""
    m = RatMatrix.coerce(m)
    b = vec(b)
    if len(b) != m.rows:
        raise ValueError("right-hand side length must equal the number of rows")
    if m.rows == 0:
        return zero_vector(m.cols)
    aug = [list(m.row(i)) + [b[i]] for i in range(m.rows)]
    rows, pivots = _rref(aug)
    if m.cols in pivots:
        return None
    x = [Fraction(0)] * m.cols
    for r, p in enumerate(pivots):
        x[p] = rows[r][-1]
    return tuple(x)


def row_space_basis(vectors: Sequence[Sequence]) -> list:
    """Canonical (reduced echelon) basis of the span of ``vectors``."""
    vs = [vec(v) for v in vectors]
    if not vs:
        return []
    rows, pivots = _rref(vs)
    return [tuple(rows[i]) for i in range(len(pivots))]


def span_dim(vectors: Sequence[Sequence]) -> int:
    return len(row_space_basis(vectors)) if vectors else 0


def in_span(v: Sequence, vectors: Sequence[Sequence]) -> bool:
    return span_dim(list(vectors) + [v]) == span_dim(vectors)


def complement_basis(sub: Sequence[Sequence], ambient: Sequence[Sequence]) -> list:
    """Vectors of ``ambient`` (in order) extending a basis of ``sub`` to one of span(sub + ambient)."""
    current = row_space_basis(sub)
    out = []
    r = len(current)
    for v in ambient:
        trial = current + [vec(v)]
        k = span_dim(trial)
        if k > r:
            current, r = row_space_basis(trial), k
            out.append(vec(v))
    return out


# generic field-element routines: work for Fraction and RatFunction alike


def determinant(rows: Sequence[Sequence]):
    m = [list(r) for r in rows]
    n = len(m)
    if n == 0:
        return Fraction(1)
    one = m[0][0] ** 0 if hasattr(m[0][0], "__pow__") else 1
    det = one
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return m[0][0] * 0
        if p != c:
            m[c], m[p] = m[p], m[c]
            det = -det
        det = det * m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return det


def inverse(rows: Sequence[Sequence]) -> list:
    """Gauss-Jordan inverse; raises ``ZeroDivisionError`` for singular input."""
    n = len(rows)
    zero = rows[0][0] * 0
    one = zero + 1
    m = [list(r) + [one if i == j else zero for j in range(n)] for i, r in enumerate(rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            raise ZeroDivisionError("matrix is singular")
        m[c], m[p] = m[p], m[c]
        piv = m[c][c]
        m[c] = [x / piv for x in m[c]]
        for i in range(n):
            if i != c and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[c])]
    return [r[n:] for r in m]


def mat_mul(a: Sequence[Sequence], b: Sequence[Sequence]) -> list:
    cols = list(zip(*b))
    out = []
    for r in a:
        row = []
        for c in cols:
            s = r[0] * c[0]
            for x, y in zip(r[1:], c[1:]):
                s = s + x * y
            row.append(s)
        out.append(row)
    return out


# ---------------------------------------------------------------------------
# polynomials in t
# ---------------------------------------------------------------------------


class Poly:
    """Univariate polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [to_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def constant(cls, c) -> "Poly":
        return cls([c])

    @classmethod
    def monomial(cls, k: int, c=1) -> "Poly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x):
        acc = x * 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction)):
            return self.coeffs == Poly([other]).coeffs
        return NotImplemented

    def __hash__(self):
        return hash(("Poly", self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    @staticmethod
    def _lift(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly([x])

    def __add__(self, other):
        other = self._lift(other)
        return Poly(a + b for a, b in zip_longest(self.coeffs, other.coeffs, fillvalue=Fraction(0)))

    __radd__ = __add__

    def __neg__(self):
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        other = self._lift(other)
        if not self.coeffs or not other.coeffs:
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        out = Poly([1])
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other):
        other = self._lift(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        d = other.degree
        while len(rem) - 1 >= d and any(rem):
            shift = len(rem) - 1 - d
            f = rem[-1] / other.lead
            q[shift] = f
            for i, c in enumerate(other.coeffs):
                rem[i + shift] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        return Poly(c / self.lead for c in self.coeffs)

    def derivative(self) -> "Poly":
        return Poly(i * c for i, c in enumerate(self.coeffs) if i)

    def lowest_order(self) -> int:
        """Multiplicity of the root t = 0."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        raise ValueError("zero polynomial")

    def __repr__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if i == 0 else f"{c}*t^{i}")
        return " + ".join(terms)


def poly_gcd(a: Poly, b: Poly) -> Poly:
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RatFunction:
    """Reduced quotient of polynomials in ``t`` with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        num = Poly._lift(num) if not isinstance(num, RatFunction) else num
        if isinstance(num, RatFunction):
            if den is not None:
                raise TypeError("denominator given with a RatFunction numerator")
            self.num, self.den = num.num, num.den
            return
        den = Poly([1]) if den is None else Poly._lift(den)
        if den.is_zero():
            raise ZeroDivisionError("denominator is identically zero")
        if num.is_zero():
            self.num, self.den = Poly(), Poly([1])
            return
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        lead = den.lead
        self.num = Poly(c / lead for c in num.coeffs)
        self.den = Poly(c / lead for c in den.coeffs)

    @classmethod
    def t(cls) -> "RatFunction":
        return cls(Poly([0, 1]))

    @staticmethod
    def _lift(x) -> "RatFunction":
        return x if isinstance(x, RatFunction) else RatFunction(x)

    def __add__(self, other):
        o = self._lift(other)
        return RatFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        o = self._lift(other)
        return RatFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._lift(other)
        if o.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RatFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def __pow__(self, k: int):
        if k < 0:
            return RatFunction(1) / (self ** (-k))
        return RatFunction(self.num ** k, self.den ** k)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Poly)):
            other = RatFunction(other)
        if isinstance(other, RatFunction):
            return self.num == other.num and self.den == other.den
        return NotImplemented

    def __hash__(self):
        return hash(("RatFunction", self.num.coeffs, self.den.coeffs))

    def __bool__(self):
        return not self.num.is_zero()

    def is_constant(self) -> bool:
        return self.num.degree <= 0 and self.den.degree == 0

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num.coeffs[0] if self.num.coeffs else Fraction(0)

    def has_pole_at(self, x) -> bool:
        return self.den(to_fraction(x)) == 0

    def __call__(self, x):
        x = to_fraction(x)
        d = self.den(x)
        if d == 0:
            raise ZeroDivisionError(f"pole at t={x}")
        return self.num(x) / d

    def __repr__(self):
        if self.den == Poly([1]):
            return f"({self.num})"
        return f"({self.num})/({self.den})"


# ---------------------------------------------------------------------------
# characteristic polynomials and signatures
# ---------------------------------------------------------------------------


def charpoly(m) -> Poly:
    """det(lambda*I - m) by the Faddeev-LeVerrier recursion (exact)."""
    m = RatMatrix.coerce(m)
    if not m.is_square():
        raise ValueError("characteristic polynomial of a non-square matrix")
    n = m.rows
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    ident = RatMatrix.identity(n)
    mk = RatMatrix.zeros(n, n)
    c = Fraction(1)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(c)
        c = -(m @ mk).trace() / k
        coeffs[n - k] = c
    return Poly(coeffs)


def squarefree_decomposition(p: Poly) -> list:
    """Yun's algorithm: ``[(a_1, 1), (a_2, 2), ...]`` with p = lead * prod a_i^i."""
    out = []
    if p.degree <= 0:
        return out
    a = p.monic()
    b = a.derivative()
    c = poly_gcd(a, b)
    w = a // c
    y = b // c
    i = 1
    while w.degree > 0:
        z = y - w.derivative()
        g = poly_gcd(w, z)
        if g.degree > 0:
            out.append((g, i))
        w = w // g
        y = z // g
        i += 1
    return out


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def sturm_sequence(p: Poly) -> list:
    seq = [p, p.derivative()]
    while not seq[-1].is_zero() and seq[-1].degree > 0:
        r = seq[-2] % seq[-1]
        if r.is_zero():
            break
        seq.append(-r)
    return [q for q in seq if not q.is_zero()]


def _variations(signs) -> int:
    s = [x for x in signs if x != 0]
    return sum(1 for a, b in zip(s, s[1:]) if a != b)


def count_real_roots(p: Poly) -> tuple[int, int]:
    """Distinct (negative, positive) real roots of ``p``, which must not vanish at 0."""
    if p(Fraction(0)) == 0:
        raise ValueError("polynomial vanishes at 0")
    seq = sturm_sequence(p)
    at_zero = _variations([_sign(q(Fraction(0))) for q in seq])
    at_pos_inf = _variations([_sign(q.lead) for q in seq])
    at_neg_inf = _variations([_sign(q.lead) * (-1) ** q.degree for q in seq])
    return at_neg_inf - at_zero, at_zero - at_pos_inf


def signature_symmetric(s) -> tuple[int, int, int]:
    """(positives, negatives, zeros) eigenvalue counts of a symmetric matrix.

    Zero is split off the characteristic polynomial by multiplicity and the
    remaining roots are counted with Sturm sequences on each square-free
    factor, so repeated eigenvalues are counted correctly.
    """
    s = RatMatrix.coerce(s)
    if not s.is_square() or s != s.T:
        raise ValueError("signature requires a symmetric matrix")
    p = charpoly(s)
    zeros = p.lowest_order()
    q = Poly(p.coeffs[zeros:])
    pos = neg = 0
    for factor, mult in squarefree_decomposition(q):
        n_neg, n_pos = count_real_roots(factor)
        pos += mult * n_pos
        neg += mult * n_neg
    if pos + neg + zeros != s.rows:
        raise ArithmeticError("characteristic polynomial has non-real roots")
    return pos, neg, zeros


def parse_ratfun(text: str) -> RatFunction:
    """Parse ``"t^2 - 1/2"``, ``"(1 + t)/t^3"``, ``"t^-1"`` and friends."""
    from .expr import evaluate

    def number(v):
        if not isinstance(v, int):
            raise ValueError(f"non-integer literal {v!r} in {text!r}; write rationals as p/q")
        return RatFunction(v)

    value = evaluate(text, {"t": RatFunction.t()}, number=number)
    return RatFunction._lift(value)


def format_ratfun(f: RatFunction) -> str:
    def poly_text(p: Poly) -> str:
        if p.is_zero():
            return "0"
        parts = []
        for i, c in enumerate(p.coeffs):
            if not c:
                continue
            mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
            if mono and abs(c) == 1:
                coef = "-" if c < 0 else ""
                parts.append(f"{coef}{mono}")
            elif mono:
                parts.append(f"{c}*{mono}")
            else:
                parts.append(str(c))
        text = " + ".join(parts).replace("+ -", "- ")
        return text

    num = poly_text(f.num)
    if f.den == Poly([1]):
        return num
    return f"({num})/({poly_text(f.den)})"
