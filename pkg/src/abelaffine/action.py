"""Affine representation X -> [[L_X, X], [0, 0]], its exponential, and checks
against closed-form actions and translation-image domains."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import rng as _rng
from .algebra import BilinearProduct, Check, PASS, left_mult_matrix
from .exact import RatMatrix, to_fraction, vec
from .expr import evaluate

TAYLOR_TERMS = 18
SCALED_NORM = 0.5


@dataclass(frozen=True)
class AffineMap:
    """v -> linear @ v + translation; entries are Fractions (exact) or floats."""

    linear: tuple
    translation: tuple

    def __post_init__(self):
        lin = tuple(tuple(r) for r in self.linear)
        tr = tuple(self.translation)
        if len(lin) != len(tr) or any(len(r) != len(tr) for r in lin):
            raise ValueError("affine map blocks have inconsistent sizes")
        object.__setattr__(self, "linear", lin)
        object.__setattr__(self, "translation", tr)

    @property
    def dim(self) -> int:
        return len(self.translation)

    @classmethod
    def identity(cls, n: int, exact: bool = True) -> "AffineMap":
        one, zero = (Fraction(1), Fraction(0)) if exact else (1.0, 0.0)
        return cls(tuple(tuple(one if i == j else zero for j in range(n)) for i in range(n)), (zero,) * n)

    @classmethod
    def from_block(cls, m) -> "AffineMap":
        rows = m.to_rows() if isinstance(m, RatMatrix) else [list(r) for r in m]
        n = len(rows) - 1
        return cls(tuple(tuple(r[:n]) for r in rows[:n]), tuple(r[n] for r in rows[:n]))

    @property
    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for r in self.linear for x in r) and all(
            isinstance(x, (int, Fraction)) for x in self.translation
        )

    def apply(self, v: Sequence) -> tuple:
        return tuple(sum(a * x for a, x in zip(r, v)) + t for r, t in zip(self.linear, self.translation))

    def compose(self, other: "AffineMap") -> "AffineMap":
        """self o other: (A, t) o (A', t') = (A A', A t' + t)."""
        n = self.dim
        a, b = self.linear, other.linear
        lin = tuple(tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n))
        tr = tuple(sum(a[i][k] * other.translation[k] for k in range(n)) + self.translation[i] for i in range(n))
        return AffineMap(lin, tr)

    __matmul__ = compose

    def inverse(self) -> "AffineMap":
        if self.is_exact:
            li = RatMatrix.from_rows(self.linear).inverse().to_rows()
        else:
            li = np.linalg.inv(np.array(self.linear, dtype=float)).tolist()
        n = self.dim
        tr = tuple(-sum(li[i][k] * self.translation[k] for k in range(n)) for i in range(n))
        return AffineMap(tuple(tuple(r) for r in li), tr)

    def as_float(self) -> "AffineMap":
        return AffineMap(tuple(tuple(float(x) for x in r) for r in self.linear), tuple(float(x) for x in self.translation))

    def max_deviation(self, other: "AffineMap") -> tuple:
        """(largest entrywise gap, (block, row, col)) with block 'linear' or 'translation'."""
        gaps = []
        for i in range(self.dim):
            for j in range(self.dim):
                gaps.append((abs(float(self.linear[i][j]) - float(other.linear[i][j])), ("linear", i + 1, j + 1)))
            gaps.append((abs(float(self.translation[i]) - float(other.translation[i])), ("translation", i + 1)))
        worst = max(g for g, _ in gaps)
        return worst, next(w for g, w in gaps if g == worst)

    def is_identity(self) -> bool:
        n = self.dim
        return all(self.linear[i][j] == int(i == j) for i in range(n) for j in range(n)) and not any(self.translation)

    def to_json(self) -> dict:
        def fmt(x):
            if isinstance(x, Fraction):
                return str(x)
            if isinstance(x, int):
                return str(x)
            return f"{x:.15g}"

        return {"linear": [[fmt(x) for x in r] for r in self.linear], "translation": [fmt(x) for x in self.translation]}


def rep_matrix(a: BilinearProduct, x: Sequence) -> RatMatrix:
    x = vec(x)
    n = a.dim
    if len(x) != n:
        raise ValueError("vector length does not match algebra dimension")
    lx = left_mult_matrix(a, x)
    rows = [list(lx.row(i)) + [x[i]] for i in range(n)] + [[Fraction(0)] * (n + 1)]
    return RatMatrix.from_rows(rows)


def _is_nilpotent(m: RatMatrix) -> bool:
    return m.power(m.rows).is_zero()


def _exp_exact(m: RatMatrix) -> RatMatrix:
    """Finite series for a nilpotent block matrix."""
    n = m.rows
    term = RatMatrix.identity(n)
    total = term
    for k in range(1, n + 1):
        term = (term @ m).scale(Fraction(1, k))
        if term.is_zero():
            break
        total = total + term
    return total


def expm_numeric(m: np.ndarray) -> np.ndarray:
    """Scaling and squaring: scale until ||m||_1 < 1/2, fixed Taylor series, square back."""
    m = np.asarray(m, dtype=float)
    norm = np.abs(m).sum(axis=0).max() if m.size else 0.0
    s = 0
    if norm >= SCALED_NORM:
        s = int(math.floor(math.log2(norm / SCALED_NORM))) + 1
    a = m / (2.0 ** s)
    term = np.eye(len(m))
    total = term.copy()
    for k in range(1, TAYLOR_TERMS + 1):
        term = term @ a / k
        total = total + term
    for _ in range(s):
        total = total @ total
    return total


def exp_action(a: BilinearProduct, x: Sequence) -> AffineMap:
    """exp of the representation matrix; exact when L_x is nilpotent."""
    xs = tuple(to_fraction(v) if not isinstance(v, float) else Fraction(v) for v in x)
    lx = left_mult_matrix(a, xs)
    floats = any(isinstance(v, float) for v in x)
    if _is_nilpotent(lx):
        out = AffineMap.from_block(_exp_exact(rep_matrix(a, xs)))
        return out.as_float() if floats else out
    m = np.array([[float(v) for v in r] for r in rep_matrix(a, xs).to_rows()])
    return AffineMap.from_block(expm_numeric(m).tolist())


# ---------------------------------------------------------------------------
# closed-form actions
# ---------------------------------------------------------------------------

_FUNCTIONS = {"exp": math.exp, "cos": math.cos, "sin": math.sin}


@dataclass(frozen=True)
class ClosedFormAction:
    name: str
    algebra: str
    params: tuple
    coords: tuple
    components: tuple
    citation: str = ""
    domain: Optional[dict] = None

    @property
    def dim(self) -> int:
        return len(self.coords)

    def with_component(self, index: int, text: str) -> "ClosedFormAction":
        comps = list(self.components)
        comps[index - 1] = text
        return ClosedFormAction(self.name, self.algebra, self.params, self.coords, tuple(comps), self.citation, self.domain)

    def evaluate(self, params: Sequence[float]) -> AffineMap:
        """Read off the affine map from the component formulas at 0 and at unit vectors."""
        n = self.dim
        if len(params) != len(self.params):
            raise ValueError(f"{self.name} takes {len(self.params)} parameters")
        env = {p: float(v) for p, v in zip(self.params, params)}

        def point(v):
            names = dict(env)
            names.update({c: float(x) for c, x in zip(self.coords, v)})
            return [float(evaluate(f, names, _FUNCTIONS, number=float)) for f in self.components]

        origin = point([0.0] * n)
        cols = []
        for j in range(n):
            e = [0.0] * n
            e[j] = 1.0
            img = point(e)
            cols.append([img[i] - origin[i] for i in range(n)])
        lin = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
        return AffineMap(lin, tuple(origin))


@dataclass(frozen=True)
class Comparison:
    ok: bool
    max_deviation: float
    trials: int
    failing_params: Optional[tuple] = None
    failing_entry: Optional[tuple] = None

    def __bool__(self):
        return self.ok


def compare_closed_form(
    a: BilinearProduct, action: ClosedFormAction, trials: int = 100, tol: float = 1e-9, lo: float = -2.0, hi: float = 2.0
) -> Comparison:
    gen = _rng.generator("compare:" + action.name)
    worst = 0.0
    for trial in range(trials):
        params = (0.0,) * len(action.params) if trial == 0 else _rng.uniform_vector(gen, len(action.params), lo, hi)
        ref = exp_action(a, params)
        got = action.evaluate(params)
        dev, where = ref.max_deviation(got)
        worst = max(worst, dev)
        if dev > tol:
            return Comparison(False, dev, trial + 1, tuple(params), where)
    return Comparison(True, worst, trials)


def group_law_check(a: BilinearProduct, trials: int = 50, tol: float = 1e-9) -> Check:
    """[rho(x), rho(y)] = 0 exactly, and exp(x) o exp(y) = exp(x + y) numerically."""
    n = a.dim
    gen = _rng.generator("group-law:" + a.name)
    for _ in range(trials):
        x = _rng.rational_vector(gen, n, bound=2)
        y = _rng.rational_vector(gen, n, bound=2)
        rx, ry = rep_matrix(a, x), rep_matrix(a, y)
        comm = rx @ ry - ry @ rx
        if not comm.is_zero():
            return Check(False, (x, y), f"representation matrices do not commute: commutator {comm.to_rows()}")
    for _ in range(trials):
        x = _rng.uniform_vector(gen, n, -2.0, 2.0)
        y = _rng.uniform_vector(gen, n, -2.0, 2.0)
        lhs = exp_action(a, x).compose(exp_action(a, y))
        rhs = exp_action(a, tuple(p + q for p, q in zip(x, y)))
        dev, _ = lhs.max_deviation(rhs)
        if dev > tol:
            return Check(False, (x, y), f"exp(x) o exp(y) differs from exp(x+y) by {dev:.3g}")
    return PASS


# ---------------------------------------------------------------------------
# translation images
# ---------------------------------------------------------------------------


def domain_predicate(domain: dict) -> Callable[[Sequence[float]], bool]:
    kind = domain["kind"]
    if kind == "all":
        return lambda p: True
    if kind == "half_plane":
        c, bound = domain["coord"] - 1, float(Fraction(domain["bound"]))
        return lambda p: p[c] > bound
    if kind == "puncture":
        pt = tuple(float(Fraction(v)) for v in domain["point"])
        return lambda p: tuple(p) != pt
    raise ValueError(f"unknown domain kind {kind!r}")


def describe_domain(domain: dict) -> str:
    kind = domain["kind"]
    if kind == "all":
        return "R^n"
    if kind == "half_plane":
        return f"{'xyz'[domain['coord'] - 1]} > {domain['bound']}"
    return f"(x,y) != ({','.join(str(v) for v in domain['point'])})"


@dataclass(frozen=True)
class DomainVerdict:
    ok: bool
    samples: int
    outside: int
    evidence: dict

    def __bool__(self):
        return self.ok


def _attain(f, target, start, box: float, steps: int = 60):
    """Newton iteration for f(p) = target from ``start`` inside |p_i| <= box.

    Returns (params, residual); leaving the box counts as not attained (infinite residual).
    """
    p = np.array(start, dtype=float)
    tgt = np.array(target, dtype=float)
    for _ in range(steps):
        r = np.array(f(p)) - tgt
        if np.linalg.norm(r) < 1e-14:
            break
        h = 1e-7
        jac = np.column_stack([(np.array(f(p + h * np.eye(len(p))[k])) - np.array(f(p))) / h for k in range(len(p))])
        try:
            p = p - np.linalg.solve(jac, r)
        except np.linalg.LinAlgError:
            break
        if np.any(np.abs(p) > box):
            return p, math.inf
    return p, float(np.linalg.norm(np.array(f(p)) - tgt))


def translation_image_sample(
    a: BilinearProduct, domain: dict, samples: int = 1600, lo: float = -6.0, hi: float = 6.0
) -> DomainVerdict:
    """Translation parts of exp(rep(x)) over a regular grid, tested against ``domain``."""
    side = max(2, int(math.isqrt(samples)))
    grid = np.linspace(lo, hi, side)
    pts = []
    for u in grid:
        for v in grid:
            pts.append(exp_action(a, (float(u), float(v))).translation)
    pts = np.array(pts, dtype=float)
    pred = domain_predicate(domain)
    outside = sum(1 for p in pts if not pred(p))
    kind = domain["kind"]
    evidence: dict = {}
    ok = outside == 0
    if kind == "half_plane":
        c, bound = domain["coord"] - 1, float(Fraction(domain["bound"]))
        mn = float(pts[:, c].min())
        evidence = {"min_coord": mn, "approaches_boundary": mn < bound + 0.01}
        ok = ok and mn < bound + 0.01
    elif kind == "puncture":
        pt = np.array([float(Fraction(v)) for v in domain["point"]])
        d = np.linalg.norm(pts - pt, axis=1)
        k = int(d.argmin())
        start = (grid[k // side], grid[k % side])
        params, resid = _attain(lambda q: exp_action(a, (float(q[0]), float(q[1]))).translation, pt, start, box=3 * max(abs(lo), abs(hi)))
        attained = resid < 1e-10
        evidence = {"min_distance": float(d.min()), "attained": attained}
        if attained:
            evidence["attained_at"] = [float(x) for x in params]
        ok = ok and not attained and float(d.min()) < 0.05
    else:
        span = pts.max(axis=0) - pts.min(axis=0)
        evidence = {"extent": [float(x) for x in span]}
        ok = ok and all(s >= 0.9 * (hi - lo) for s in span)
    return DomainVerdict(bool(ok), len(pts), outside, evidence)
