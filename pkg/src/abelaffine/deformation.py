"""Base change, one-parameter degenerations and their t -> 0 limits.

Convention used throughout: a family ``g(t)`` turns the *source* algebra into
``mu_g(t)(x, y) = g^-1 mu(g x, g y)``; the *target* is the limit at ``t = 0``.
So the target lies in the orbit closure of the source.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

import numpy as np

from .algebra import (
    Algebra,
    Check,
    PASS,
    basis,
    check_associative,
    check_commutative,
    fingerprint,
    multiply,
    orbit_dim,
)
from .exact import (
    RatFunction,
    RatMatrix,
    determinant,
    format_ratfun,
    inverse,
    mat_mul,
    nullspace,
    parse_ratfun,
)


def transport(a: Algebra, g) -> Algebra:
    g = RatMatrix.coerce(g)
    if g.det() == 0:
        raise ValueError("transport needs an invertible matrix")
    gi = g.inverse()
    n = a.dim
    cols = [g.column(i) for i in range(n)]
    c = [[list(gi @ multiply(a, cols[i], cols[j])) for j in range(n)] for i in range(n)]
    return Algebra(n, c, a.name, a.commutative)


@dataclass(frozen=True)
class DegenerationFamily:
    source: str
    target: str
    g: tuple  # rows of RatFunction
    note: str = ""
    diagram: str = ""

    def __post_init__(self):
        rows = tuple(tuple(RatFunction._lift(x) for x in r) for r in self.g)
        object.__setattr__(self, "g", rows)
        if any(len(r) != len(rows) for r in rows):
            raise ValueError("family matrix must be square")
        if not determinant(rows):
            raise ValueError(f"family {self.source}->{self.target}: det g(t) is identically zero")

    @property
    def dim(self) -> int:
        return len(self.g)

    @classmethod
    def from_strings(cls, source, target, matrix, note="", diagram=""):
        return cls(source, target, tuple(tuple(parse_ratfun(s) for s in row) for row in matrix), note, diagram)

    @classmethod
    def from_json(cls, doc: dict) -> "DegenerationFamily":
        return cls.from_strings(doc["source"], doc["target"], doc["matrix"], doc.get("note", ""), doc.get("diagram", ""))

    def to_json(self) -> dict:
        out = {
            "source": self.source,
            "target": self.target,
            "matrix": [[format_ratfun(x) for x in row] for row in self.g],
            "note": self.note,
        }
        if self.diagram:
            out["diagram"] = self.diagram
        return out

    def at(self, t) -> RatMatrix:
        return RatMatrix.from_rows([[x(t) for x in row] for row in self.g])

    @classmethod
    def identity(cls, source: str, target: str, n: int, note: str = "identity") -> "DegenerationFamily":
        return cls(source, target, tuple(tuple(RatFunction(int(i == j)) for j in range(n)) for i in range(n)), note)


def transport_family(a: Algebra, fam: DegenerationFamily) -> list:
    """Structure constants of g(t)^-1 mu(g(t) ., g(t) .) as rational functions, [i][j][k]."""
    n = a.dim
    if fam.dim != n:
        raise ValueError("family and algebra dimensions differ")
    g = [list(r) for r in fam.g]
    gi = inverse(g)
    cols = [[g[r][i] for r in range(n)] for i in range(n)]
    zero = RatFunction(0)
    out = []
    for i in range(n):
        plane = []
        for j in range(n):
            prod = [zero] * n
            for p, q in itertools.product(range(n), repeat=2):
                s = cols[i][p] * cols[j][q]
                if not s:
                    continue
                for k in range(n):
                    if a.c[p][q][k]:
                        prod[k] = prod[k] + s * a.c[p][q][k]
            plane.append([sum((gi[k][m] * prod[m] for m in range(n)), zero) for k in range(n)])
        out.append(plane)
    return out


class PoleError(ArithmeticError):
    def __init__(self, index, entry):
        self.index = index
        self.entry = entry
        i, j, k = index
        super().__init__(f"pole at t=0 in c[{i + 1}][{j + 1}][{k + 1}] = {format_ratfun(entry)}")


def limit_at_zero(tensor, name: str = "limit") -> Algebra:
    n = len(tensor)
    for i, j, k in itertools.product(range(n), repeat=3):
        if tensor[i][j][k].has_pole_at(0):
            raise PoleError((i, j, k), tensor[i][j][k])
    c = [[[tensor[i][j][k](0) for k in range(n)] for j in range(n)] for i in range(n)]
    a = Algebra(n, c, name, commutative=False)
    if not check_commutative(a) or not check_associative(a):
        raise ArithmeticError("limit tensor is not commutative and associative; malformed family")
    return Algebra(n, c, name, True)


def verify_arrow(fam: DegenerationFamily, catalog) -> Check:
    """Exact check that the t -> 0 limit of the transported source equals the target."""
    src = catalog.algebra(fam.source)
    dst = catalog.algebra(fam.target)
    try:
        lim = limit_at_zero(transport_family(src, fam))
    except PoleError as exc:
        return Check(False, ("pole",) + tuple(x + 1 for x in exc.index), str(exc))
    except ArithmeticError as exc:
        return Check(False, ("malformed",), str(exc))
    n = src.dim
    for i, j, k in itertools.product(range(n), repeat=3):
        if lim.c[i][j][k] != dst.c[i][j][k]:
            return Check(
                False,
                ("mismatch", i + 1, j + 1, k + 1),
                f"limit c[{i + 1}][{j + 1}][{k + 1}] = {lim.c[i][j][k]}, target has {dst.c[i][j][k]}",
            )
    g1 = fam.at(1)
    if g1.det() == 0:
        return Check(False, ("singular at t=1",), "g(1) is singular")
    if fingerprint(transport(src, g1)) != fingerprint(src):
        return Check(False, ("fingerprint at t=1",), "g(1) does not preserve the isomorphism class")
    return PASS


# ---------------------------------------------------------------------------
# obstructions
# ---------------------------------------------------------------------------


def _weighted_monomials(weight: int, parts: int) -> list:
    """Exponent vectors (m_1..m_parts) with sum k*m_k = weight."""
    if parts == 0:
        return [()] if weight == 0 else []
    out = []
    for m in range(weight // parts + 1):
        for rest in _weighted_monomials(weight - m * parts, parts - 1):
            out.append(rest + (m,))
    return out


@lru_cache(maxsize=256)
def _power_traces(c: tuple) -> tuple:
    """s_k(x) = tr(L_x^k), k = 1..n, as polynomials in the coordinates of x."""
    from .lattice import Poly

    n = len(c)
    xs = [Poly.var(f"x{i + 1}") for i in range(n)]
    lx = [[sum((xs[i] * c[i][j][k] for i in range(n)), Poly()) for j in range(n)] for k in range(n)]
    out, power = [], lx
    for _ in range(n):
        out.append(sum((power[i][i] for i in range(n)), Poly()))
        power = [[sum((power[r][m] * lx[m][q] for m in range(n)), Poly()) for q in range(n)] for r in range(n)]
    return tuple(out)


def _relation_value(traces, exps):
    from .lattice import Poly

    v = Poly.const(1)
    for s, e in zip(traces, exps):
        v = v * s ** e
    return v


def trace_identities(a: Algebra, weight: int) -> list:
    """Basis of the linear relations sum_m r_m prod_k s_k^{m_k} = 0 of the given weight."""
    mons = _weighted_monomials(weight, a.dim)
    traces = _power_traces(a.c)
    values = [_relation_value(traces, m) for m in mons]
    keys = sorted({k for v in values for k in v.terms})
    if not keys:
        return [dict(zip(mons, [Fraction(int(i == j)) for i in range(len(mons))])) for j in range(len(mons))]
    rows = [[v.terms.get(k, Fraction(0)) for v in values] for k in keys]
    return [dict(zip(mons, vec)) for vec in nullspace(RatMatrix.from_rows(rows))]


def holds(a: Algebra, relation: dict) -> bool:
    from .lattice import Poly

    traces = _power_traces(a.c)
    total = sum((_relation_value(traces, m) * r for m, r in relation.items()), Poly())
    return not total.terms


def format_relation(relation: dict) -> str:
    parts = []
    for m, r in relation.items():
        if not r:
            continue
        mono = "*".join(f"s{k + 1}" if e == 1 else f"s{k + 1}^{e}" for k, e in enumerate(m) if e) or "1"
        parts.append(f"{r}*{mono}" if r != 1 else mono)
    return " + ".join(parts).replace("+ -", "- ") + " = 0  (s_k(x) = tr L_x^k)"


def trace_identity_obstruction(source: Algebra, target: Algebra) -> Optional[str]:
    """A trace identity of the source that fails on the target, if any.

    These identities are polynomial in the structure constants and invariant
    under base change, so they hold on the whole orbit closure of the source.
    """
    for w in range(1, source.dim + 2):
        for rel in trace_identities(source, w):
            if not holds(target, rel):
                return format_relation(rel)
    return None


def obstruction(source: Algebra, target: Algebra) -> Optional[tuple]:
    """(kind, detail) when target provably is not in the orbit closure of source."""
    fs, ft = fingerprint(source), fingerprint(target)
    if fs == ft:
        return None
    od_s, od_t = orbit_dim(source), orbit_dim(target)
    if od_t >= od_s:
        return "orbit dimension", {"orbit_dim_source": od_s, "orbit_dim_target": od_t}
    rel = trace_identity_obstruction(source, target)
    if rel:
        return "trace identity", {"relation": rel}
    return None


# ---------------------------------------------------------------------------
# search
# ---------------------------------------------------------------------------


@dataclass
class SearchResult:
    found: bool
    family: Optional[DegenerationFamily] = None
    obstruction: str = ""
    candidates: int = 0
    detail: dict = field(default_factory=dict)


@lru_cache(maxsize=None)
def integer_matrices(n: int, bound: int = 2) -> np.ndarray:
    """All invertible n x n integer matrices with entries in [-bound, bound].

    The identity comes first; the rest are ordered by L1 weight, then
    lexicographically with entries ranked 0, 1, -1, 2, -2, ...
    """
    k = 2 * bound + 1
    digits = np.indices((k,) * (n * n)).reshape(n * n, -1).T
    # digit d encodes the value 0, 1, -1, 2, -2, ... so that lexicographic order on digits is the rank order
    values = np.array([(d + 1) // 2 * (1 if d % 2 else -1) for d in range(k)], dtype=np.int64)
    allm = values[digits].reshape(-1, n, n)
    dets = np.round(np.linalg.det(allm.astype(float))).astype(np.int64)
    keep = dets != 0
    allm, digits = allm[keep], digits[keep]
    weight = np.abs(allm).reshape(len(allm), -1).sum(axis=1)
    ident = np.all(allm == np.eye(n, dtype=np.int64), axis=(1, 2))
    order = np.lexsort(tuple(digits[:, c] for c in reversed(range(n * n))) + (weight, ~ident))
    return allm[order]


def _integer_tensor(c) -> tuple:
    from math import lcm

    den = 1
    for plane in c:
        for row in plane:
            for x in row:
                den = lcm(den, Fraction(x).denominator)
    arr = np.array([[[int(Fraction(x) * den) for x in row] for row in plane] for plane in c], dtype=np.int64)
    return arr, den


def find_isomorphism(a: Algebra, b: Algebra, bound: int = 2, chunk: int = 200_000) -> Optional[RatMatrix]:
    """First Q (in enumeration order) with transport(a, Q) == b, or None.

    Uses mu_a(Q e_i, Q e_j) = Q mu_b(e_i, e_j), which is polynomial in Q and so
    exact in integer arithmetic once both tensors are cleared of denominators.
    """
    n = a.dim
    ta, da = _integer_tensor(a.c)
    tb, db = _integer_tensor(b.c)
    qs = integer_matrices(n, bound)
    for start in range(0, len(qs), chunk):
        q = qs[start:start + chunk]
        lhs = np.einsum("npi,nqj,pqk->nijk", q, q, ta, optimize=True) * db
        rhs = np.einsum("nkm,ijm->nijk", q, tb, optimize=True) * da
        ok = np.all((lhs == rhs).reshape(len(q), -1), axis=1)
        hits = np.nonzero(ok)[0]
        if len(hits):
            return RatMatrix.from_rows(q[hits[0]].tolist())
    return None


def _int_rows(m: RatMatrix) -> list:
    return [[int(x) if x.denominator == 1 else str(x) for x in r] for r in m.to_rows()]


def _diag_limit(b: Algebra, exps: Sequence[int]) -> Optional[tuple]:
    """Limit of transport(b, diag(t^e)) at 0, or None on a pole."""
    n = b.dim
    c = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for i, j, k in itertools.product(range(n), repeat=3):
        v = b.c[i][j][k]
        if not v:
            continue
        e = exps[i] + exps[j] - exps[k]
        if e < 0:
            return None
        if e == 0:
            c[i][j][k] = v
    return tuple(tuple(tuple(r) for r in p) for p in c)


def _monomial_family(p: RatMatrix, exps, q: RatMatrix, source: str, target: str, note: str) -> DegenerationFamily:
    n = p.rows
    t = RatFunction.t()
    d = [[(t ** exps[i] if i == j else RatFunction(0)) for j in range(n)] for i in range(n)]
    prow = [[RatFunction(x) for x in r] for r in p.to_rows()]
    qrow = [[RatFunction(x) for x in r] for r in q.to_rows()]
    g = mat_mul(mat_mul(prow, d), qrow)
    return DegenerationFamily(source, target, tuple(tuple(r) for r in g), note)


def search_degeneration(source: Algebra, target: Algebra, budget: int = 20000, p_bound: int = 1) -> SearchResult:
    """Look for g = P diag(t^a) Q with lim_{t->0} mu_g = target.

    P runs over invertible integer matrices with entries in [-p_bound, p_bound]
    (ordered as in :func:`integer_matrices`), exponents over [-3, 3]^n ordered by
    total size with positive exponents first, and Q over entries in [-2, 2].  ``budget`` caps the number of (P, a) pairs tried.
    """
    if source.dim != target.dim:
        raise ValueError("source and target dimensions differ")
    fs, ft = fingerprint(source), fingerprint(target)
    if fs == ft:
        q = find_isomorphism(source, target)
        if q is not None:
            fam = _monomial_family(q, [0] * source.dim, RatMatrix.identity(source.dim), source.name, target.name, "isomorphism")
            return SearchResult(True, fam, candidates=1)
    obs = obstruction(source, target)
    if obs:
        return SearchResult(False, obstruction=obs[0], detail=obs[1])
    n = source.dim
    tried = 0
    seen_limits: dict = {}
    exps_all = sorted(itertools.product(range(-3, 4), repeat=n), key=lambda e: (sum(map(abs, e)), max(map(abs, e)), [-x for x in e]))
    for pm in integer_matrices(n, p_bound):
        p = RatMatrix.from_rows(pm.tolist())
        b = transport(source, p)
        for exps in exps_all:
            if tried >= budget:
                return SearchResult(False, obstruction="budget exhausted", candidates=tried)
            tried += 1
            lim = _diag_limit(b, exps)
            if lim is None:
                continue
            if lim in seen_limits:
                continue
            lim_alg = Algebra(n, lim, "limit", True)
            if not check_associative(lim_alg):
                seen_limits[lim] = None
                continue
            if fingerprint(lim_alg) != ft:
                seen_limits[lim] = None
                continue
            q = find_isomorphism(lim_alg, target)
            seen_limits[lim] = q
            if q is None:
                continue
            note = f"P diag(t^a) Q search: P={pm.tolist()}, a={list(exps)}, Q={_int_rows(q)}"
            fam = _monomial_family(p, exps, q, source.name, target.name, note)
            return SearchResult(True, fam, candidates=tried)
    return SearchResult(False, obstruction="search space exhausted", candidates=tried)
