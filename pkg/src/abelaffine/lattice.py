"""Integer affine groups from torus quotients: closure, inverses, freeness, descent."""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import rng as _rng
from .action import AffineMap, exp_action
from .algebra import Check, PASS
from .exact import RatMatrix, nullspace, solve_linear, to_fraction
from .expr import evaluate


class Poly:
    """Multivariate polynomial with Fraction coefficients; monomials are sorted (name, exp) tuples."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping] = None):
        self.terms = {m: Fraction(c) for m, c in (terms or {}).items() if c}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): to_fraction(c)})

    @classmethod
    def var(cls, name: str) -> "Poly":
        return cls({((name, 1),): 1})

    @staticmethod
    def _lift(x) -> "Poly":
        return x if isinstance(x, Poly) else Poly.const(x)

    def __add__(self, other):
        other = Poly._lift(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-Poly._lift(other))

    def __rsub__(self, other):
        return Poly._lift(other) - self

    def __mul__(self, other):
        other = Poly._lift(other)
        out: dict = {}
        for (m1, c1), (m2, c2) in itertools.product(self.terms.items(), other.terms.items()):
            exps = dict(m1)
            for v, e in m2:
                exps[v] = exps.get(v, 0) + e
            m = tuple(sorted(exps.items()))
            out[m] = out.get(m, 0) + c1 * c2
        return Poly(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = Poly._lift(other)
        if not other.is_constant() or not other.constant_value():
            raise ZeroDivisionError("only division by nonzero constants is supported")
        return self * Poly.const(1 / other.constant_value())

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative powers are not polynomial")
        out = Poly.const(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, (Poly, int, Fraction)) and not (self - Poly._lift(other)).terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_constant(self) -> bool:
        return all(m == () for m in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def degree_in(self, name: str) -> int:
        return max((dict(m).get(name, 0) for m in self.terms), default=0)

    def coefficient(self, name: str, power: int) -> "Poly":
        """Coefficient of name^power, as a polynomial in the other variables."""
        out = {}
        for m, c in self.terms.items():
            d = dict(m)
            if d.get(name, 0) == power:
                d.pop(name, None)
                out[tuple(sorted(d.items()))] = c
        return Poly(out)

    def subs(self, values: Mapping[str, object]):
        total = Poly()
        for m, c in self.terms.items():
            term = Poly.const(c)
            for v, e in m:
                term = term * (Poly._lift(values[v]) if v in values else Poly.var(v)) ** e
            total = total + term
        return total

    def __call__(self, values: Mapping[str, object]) -> Fraction:
        missing = self.variables() - set(values)
        if missing:
            raise ValueError(f"unbound variables {sorted(missing)}")
        total = Fraction(0)
        for m, c in self.terms.items():
            term = Fraction(c)
            for v, e in m:
                term *= Fraction(values[v]) ** e
            total += term
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m, c in sorted(self.terms.items(), key=lambda mc: (-sum(e for _, e in mc[0]), mc[0])):
            mono = "*".join(v if e == 1 else f"{v}^{e}" for v, e in m)
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")


def parse_poly(text: str, names: Sequence[str]) -> Poly:
    return Poly._lift(evaluate(text, {n: Poly.var(n) for n in names}, number=lambda v: Poly.const(Fraction(v))))


# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CrystalFamily:
    name: str
    params: tuple
    linear: tuple  # rows of Poly
    translation: tuple
    domain: dict = field(default_factory=lambda: {"kind": "all"})
    source_action: str = ""
    source_params: tuple = ()
    citation: str = ""
    group: str = ""

    @classmethod
    def from_json(cls, doc: dict) -> "CrystalFamily":
        names = tuple(doc["params"])
        lin = tuple(tuple(parse_poly(s, names) for s in row) for row in doc["linear_pattern"])
        tr = tuple(parse_poly(s, names) for s in doc["translation_pattern"])
        src = tuple(parse_poly(s, names) for s in doc.get("source_params", ()))
        return cls(doc["name"], names, lin, tr, doc.get("domain", {"kind": "all"}), doc.get("source_action", ""), src,
                   doc.get("citation", ""), doc.get("group", ""))

    def with_entry(self, row: int, col: int, text: str) -> "CrystalFamily":
        lin = [list(r) for r in self.linear]
        lin[row - 1][col - 1] = parse_poly(text, self.params)
        return CrystalFamily(self.name + "*", self.params, tuple(tuple(r) for r in lin), self.translation, self.domain,
                             self.source_action, self.source_params, self.citation, self.group)

    @property
    def dim(self) -> int:
        return len(self.translation)

    @property
    def param_count(self) -> int:
        return len(self.params)

    def _env(self, values: Sequence) -> dict:
        if len(values) != len(self.params):
            raise ValueError(f"{self.name} takes {len(self.params)} parameters")
        return dict(zip(self.params, values))

    def element(self, values: Sequence) -> AffineMap:
        env = self._env([to_fraction(v) for v in values])
        return AffineMap(tuple(tuple(e(env) for e in row) for row in self.linear), tuple(e(env) for e in self.translation))

    def symbolic(self, names: Sequence[str]) -> tuple:
        env = self._env([Poly.var(n) for n in names])
        return (
            tuple(tuple(e.subs(env) for e in row) for row in self.linear),
            tuple(e.subs(env) for e in self.translation),
        )

    def readers(self) -> list:
        """For each parameter, an entry of the pattern of the form +-param + f(earlier params).

        Parameters can then be read back from any element one after another.
        """
        entries = [(("translation", i), e) for i, e in enumerate(self.translation)]
        entries += [(("linear", i, j), e) for i, row in enumerate(self.linear) for j, e in enumerate(row)]
        order, known = [], set()
        remaining = list(self.params)
        while remaining:
            progress = False
            for p in list(remaining):
                for where, e in entries:
                    if e.degree_in(p) != 1:
                        continue
                    coeff = e.coefficient(p, 1)
                    rest = e - coeff * Poly.var(p)
                    if coeff.is_constant() and abs(coeff.constant_value()) == 1 and rest.variables() <= known:
                        order.append((p, where, coeff.constant_value(), rest))
                        known.add(p)
                        remaining.remove(p)
                        progress = True
                        break
            if not progress:
                raise ValueError(f"{self.name}: parameters cannot be read back from the pattern")
        return order

    def read_params(self, m) -> dict:
        """Parameter values (possibly symbolic) reproducing the entries of ``m`` through the readers."""
        lin, tr = m if isinstance(m, tuple) else (m.linear, m.translation)
        values: dict = {}
        for p, where, sign, rest in self.readers():
            entry = tr[where[1]] if where[0] == "translation" else lin[where[1]][where[2]]
            values[p] = (Poly._lift(entry) - rest.subs(values)) * sign
            if isinstance(entry, (int, Fraction)):
                values[p] = values[p].constant_value()
        return values


def _compose_symbolic(a, b):
    (la, ta), (lb, tb) = a, b
    n = len(ta)
    lin = tuple(tuple(sum((la[i][k] * lb[k][j] for k in range(n)), Poly()) for j in range(n)) for i in range(n))
    tr = tuple(sum((la[i][k] * tb[k] for k in range(n)), Poly()) + ta[i] for i in range(n))
    return lin, tr


def _primed(names, suffix):
    return [n + suffix for n in names]


@dataclass(frozen=True)
class LawResult:
    ok: bool
    law: dict = field(default_factory=dict)
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def _draw(gen, k, lo=-5, hi=5):
    return tuple(gen.randint(lo, hi) for _ in range(k))


def _matches(fam: CrystalFamily, values: dict, m: AffineMap) -> bool:
    if any(Fraction(v).denominator != 1 for v in values.values()):
        return False
    return fam.element([values[p] for p in fam.params]) == m


def composition_law(fam: CrystalFamily) -> Optional[dict]:
    """params'' as polynomials in params and params' when the family is closed, else None."""
    u, v = fam.params, _primed(fam.params, "'")
    prod = _compose_symbolic(fam.symbolic(u), fam.symbolic(v))
    w = fam.read_params(prod)
    lin, tr = fam.symbolic(fam.params)
    env = {p: w[p] for p in fam.params}
    back = (tuple(tuple(e.subs(env) for e in row) for row in lin), tuple(e.subs(env) for e in tr))
    return w if back == prod else None


def closure_check(fam: CrystalFamily, trials: int = 200) -> LawResult:
    gen = _rng.generator("closure:" + fam.name)
    for _ in range(trials):
        x, y = _draw(gen, fam.param_count), _draw(gen, fam.param_count)
        m = fam.element(x).compose(fam.element(y))
        w = fam.read_params(m)
        if not _matches(fam, w, m):
            return LawResult(False, witness=(x, y), detail=f"{fam.name}{x} o {fam.name}{y} leaves the family")
    law = composition_law(fam)
    if law is None:
        return LawResult(False, detail="symbolic product leaves the pattern")
    return LawResult(True, law={f"{p}''": repr(law[p]) for p in fam.params})


def inverse_identity_check(fam: CrystalFamily, trials: int = 200) -> LawResult:
    zero = fam.element([0] * fam.param_count)
    if not zero.is_identity():
        return LawResult(False, witness=(0,) * fam.param_count, detail="element(0) is not the identity")
    gen = _rng.generator("inverse:" + fam.name)
    for _ in range(trials):
        x = _draw(gen, fam.param_count)
        inv = fam.element(x).inverse()
        w = fam.read_params(inv)
        if not _matches(fam, w, inv):
            return LawResult(False, witness=x, detail=f"inverse of {fam.name}{x} is not in the family")
    return LawResult(True, law=inverse_law(fam))


def inverse_law(fam: CrystalFamily) -> dict:
    """Inverse parameters read from the composition law: solve law(params, w) = 0 for w."""
    law = composition_law(fam)
    if law is None:
        return {}
    # the laws here are affine in the primed parameters; solve each once its dependencies are known
    primed = {p: p + "'" for p in fam.params}
    sol: dict = {}
    while len(sol) < fam.param_count:
        progress = False
        for p in fam.params:
            if p in sol:
                continue
            eq = law[p].subs({primed[q]: sol[q] for q in sol})
            coeff = eq.coefficient(primed[p], 1)
            rest = eq - coeff * Poly.var(primed[p])
            unknown = {primed[q] for q in fam.params if q not in sol}
            if eq.degree_in(primed[p]) == 1 and coeff.is_constant() and not (rest.variables() & unknown):
                sol[p] = -rest / coeff.constant_value()
                progress = True
        if not progress:
            return {}
    return {f"{p}^-1": repr(sol[p]) for p in fam.params}


@dataclass(frozen=True)
class FreenessResult:
    ok: bool
    checked: int
    fixed_outside: int
    witness: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def fixed_point_set(m: AffineMap) -> Optional[tuple]:
    """(particular point, direction basis) of {x : m(x) = x}, or None when empty."""
    n = m.dim
    lmi = RatMatrix.from_rows([[m.linear[i][j] - int(i == j) for j in range(n)] for i in range(n)])
    x0 = solve_linear(lmi, [-t for t in m.translation])
    if x0 is None:
        return None
    return x0, nullspace(lmi)


def meets_domain(fixed: tuple, domain: dict) -> bool:
    x0, dirs = fixed
    if domain["kind"] == "all":
        return True
    if domain["kind"] == "half_plane":
        c, bound = domain["coord"] - 1, Fraction(domain["bound"])
        return x0[c] > bound or any(d[c] for d in dirs)
    raise ValueError(f"unsupported domain kind {domain['kind']!r}")


def freeness_check(fam: CrystalFamily, trials: int = 200) -> FreenessResult:
    gen = _rng.generator("freeness:" + fam.name)
    checked = outside = 0
    for _ in range(trials):
        x = _draw(gen, fam.param_count)
        m = fam.element(x)
        if m.is_identity():
            continue
        checked += 1
        fixed = fixed_point_set(m)
        if fixed is None:
            continue
        if meets_domain(fixed, fam.domain):
            return FreenessResult(False, checked, outside, x, f"{fam.name}{x} fixes {tuple(map(str, fixed[0]))}")
        outside += 1
    return FreenessResult(True, checked, outside)


def descends_to_torus(m: AffineMap, tol: float = 1e-12) -> bool:
    for row in m.linear:
        for x in row:
            if isinstance(x, (int, Fraction)):
                if Fraction(x).denominator != 1:
                    return False
            elif abs(x - round(x)) > tol:
                return False
    return True


def commute(fam: CrystalFamily, x: Sequence, y: Sequence) -> bool:
    a, b = fam.element(x), fam.element(y)
    return a.compose(b) == b.compose(a)


def abelian_check(fam: CrystalFamily, trials: int = 200) -> Check:
    gen = _rng.generator("abelian:" + fam.name)
    for _ in range(trials):
        x, y = _draw(gen, fam.param_count), _draw(gen, fam.param_count)
        if not commute(fam, x, y):
            return Check(False, (x, y), "non-commuting pair")
    return PASS


def source_action_check(fam: CrystalFamily, algebra, trials: int = 50) -> Check:
    """element(params) equals exp(rep) of the source algebra at the stored parameter change."""
    gen = _rng.generator("source:" + fam.name)
    for trial in range(trials):
        x = (0,) * fam.param_count if trial == 0 else _draw(gen, fam.param_count)
        env = dict(zip(fam.params, map(Fraction, x)))
        y = [e(env) for e in fam.source_params]
        if exp_action(algebra, y) != fam.element(x):
            return Check(False, x, f"{fam.name}{x} differs from exp(rep) of {fam.source_action} at {tuple(map(str, y))}")
    return PASS
