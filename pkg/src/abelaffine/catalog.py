"""Ground-truth data: algebras, expected flags, closed-form actions, degeneration
families, torus groups and the errata ledger.  Everything is read from JSON
under ``data/`` (or ``$AFFINE_DATA_DIR``)."""
from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .action import ClosedFormAction
from .algebra import Algebra, check_associative, check_commutative
from .cohomology import SymmetricCochain
from .deformation import DegenerationFamily
from .exact import to_fraction
from .lattice import CrystalFamily

DATA_ENV = "AFFINE_DATA_DIR"


class DataError(Exception):
    """Malformed, duplicated or inconsistent catalog data."""


def default_data_dir() -> Path:
    env = os.environ.get(DATA_ENV)
    return Path(env) if env else Path(__file__).with_name("data")


@dataclass(frozen=True)
class Expected:
    value: object
    citation: str


@dataclass(frozen=True)
class PrintedCochain:
    label: str
    cochain: SymmetricCochain


@dataclass(frozen=True)
class CatalogEntry:
    algebra: Algebra
    expected: dict
    action: str
    citation: str
    printed_h2: tuple = ()
    printed_h2_citation: str = ""

    @property
    def name(self) -> str:
        return self.algebra.name

    @property
    def dim(self) -> int:
        return self.algebra.dim


@dataclass(frozen=True)
class Erratum:
    id: str
    kind: str
    target: str
    location: str
    printed: object
    corrected: object
    justification: str
    component: Optional[int] = None


@dataclass
class Catalog:
    entries: dict
    actions: dict
    arrows: list
    tori: dict
    errata: list
    unrealized: list = field(default_factory=list)
    data_dir: Path = Path(".")
    arrow_meta: dict = field(default_factory=dict)  # (source, target) -> raw file fields

    def _lookup(self, table: dict, name: str):
        if name in table:
            return table[name]
        folded = {k.lower(): v for k, v in table.items()}
        key = name.lower().replace("μ", "mu")
        if key in folded:
            return folded[key]
        raise KeyError(name)

    def entry(self, name: str) -> CatalogEntry:
        return self._lookup(self.entries, name)

    def algebra(self, name: str) -> Algebra:
        return self.entry(name).algebra

    def action(self, name: str) -> ClosedFormAction:
        return self._lookup(self.actions, name)

    def torus(self, name: str) -> CrystalFamily:
        return self._lookup(self.tori, name)

    def resolve(self, name: str):
        """Entry, action or torus family named ``name`` (case-insensitive)."""
        for table in (self.entries, self.actions, self.tori):
            try:
                return self._lookup(table, name)
            except KeyError:
                pass
        raise KeyError(name)

    def arrows_with_role(self, role: str) -> list:
        return [f for f in self.arrows if self.arrow_meta.get((f.source, f.target), {}).get("role") == role]

    def by_dim(self, n: int) -> list:
        return [e for e in self.entries.values() if e.dim == n]

    def errata_for(self, target: str, kind: Optional[str] = None) -> list:
        return [e for e in self.errata if e.target.lower() == target.lower() and (kind is None or e.kind == kind)]

    def corrected_action(self, name: str) -> ClosedFormAction:
        act = self.action(name)
        for e in self.errata_for(act.name, "action"):
            act = act.with_component(e.component, e.corrected)
        return act

    def expected_flags(self, name: str) -> dict:
        """Asserted properties with citations; an action name maps to its algebra."""
        try:
            entry = self.entry(name)
        except KeyError:
            entry = self.entry(self.action(name).algebra)
        return dict(entry.expected)


def _read_json(path: Path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise DataError(f"{path}: {exc}") from None


def _products(doc, path) -> dict:
    out = {}
    try:
        for i, j, coeffs in doc["products"]:
            if doc.get("commutative", True) and i > j:
                raise DataError(f"{path}: commutative products must list i <= j only, got ({i},{j})")
            out[(i, j)] = {k: to_fraction(v) for k, v in coeffs}
    except (TypeError, ValueError, KeyError) as exc:
        raise DataError(f"{path}: malformed products ({exc})") from None
    return out


def load_algebra_file(path) -> tuple:
    path = Path(path)
    doc = _read_json(path)
    for key in ("name", "dim", "products"):
        if key not in doc:
            raise DataError(f"{path}: missing field {key!r}")
    try:
        alg = Algebra.from_products(doc["name"], doc["dim"], _products(doc, path), doc.get("commutative", True))
    except (ValueError, IndexError) as exc:
        raise DataError(f"{path}: {exc}") from None
    if not check_associative(alg):
        raise DataError(f"{path}: product is not associative at {check_associative(alg).witness}")
    if not check_commutative(alg):
        raise DataError(f"{path}: product is not commutative")
    return alg, doc


def _printed_h2(doc, n) -> tuple:
    block = doc.get("h2_printed")
    if not block:
        return (), ""
    out = []
    for c in block["cochains"]:
        values = {(i, j): {k: v for k, v in kv} for i, j, kv in c["values"]}
        out.append(PrintedCochain(c["label"], SymmetricCochain.from_values(n, values)))
    return tuple(out), block.get("citation", "")


def _load_entries(root: Path) -> dict:
    entries: dict = {}
    for path in sorted((root / "algebras").glob("*.json")):
        alg, doc = load_algebra_file(path)
        if alg.name in entries:
            raise DataError(f"{path}: duplicate algebra name {alg.name!r}")
        expected = {k: Expected(v["value"], v["citation"]) for k, v in doc.get("expected", {}).items()}
        printed, pcit = _printed_h2(doc, alg.dim)
        entries[alg.name] = CatalogEntry(alg, expected, doc.get("action", ""), doc.get("citation", ""), printed, pcit)
    return entries


def _load_actions(root: Path) -> dict:
    actions: dict = {}
    for path in sorted((root / "actions").glob("*.json")):
        doc = _read_json(path)
        try:
            act = ClosedFormAction(doc["name"], doc["algebra"], tuple(doc["params"]), tuple(doc["coords"]),
                                   tuple(doc["components"]), doc.get("citation", ""), doc.get("domain"))
        except KeyError as exc:
            raise DataError(f"{path}: missing field {exc}") from None
        if act.name in actions:
            raise DataError(f"{path}: duplicate action name {act.name!r}")
        actions[act.name] = act
    return actions


def _load_arrows(root: Path) -> tuple:
    arrows, unrealized, meta = [], [], {}
    for path in sorted((root / "arrows").glob("*.json")):
        doc = _read_json(path)
        meta[(doc.get("source"), doc.get("target"))] = doc
        if doc.get("status") == "unrealized":
            unrealized.append(doc)
            continue
        try:
            arrows.append(DegenerationFamily.from_json(doc))
        except (KeyError, ValueError) as exc:
            raise DataError(f"{path}: {exc}") from None
    return arrows, unrealized, meta


def _load_tori(root: Path) -> dict:
    tori: dict = {}
    for path in sorted((root / "tori").glob("*.json")):
        try:
            fam = CrystalFamily.from_json(_read_json(path))
        except (KeyError, ValueError) as exc:
            raise DataError(f"{path}: {exc}") from None
        tori[fam.name] = fam
    return tori


def _load_errata(root: Path) -> list:
    path = root / "errata.json"
    if not path.exists():
        return []
    doc = _read_json(path)
    try:
        return [
            Erratum(e["id"], e["kind"], e["target"], e["location"], e["printed"], e["corrected"], e["justification"],
                    e.get("component"))
            for e in doc["errata"]
        ]
    except KeyError as exc:
        raise DataError(f"{path}: erratum missing field {exc}") from None


_CACHE: dict = {}


def load_catalog(data_dir=None, use_cache: bool = True) -> Catalog:
    root = Path(data_dir) if data_dir else default_data_dir()
    key = str(root.resolve())
    if use_cache and key in _CACHE:
        return _CACHE[key]
    if not (root / "algebras").is_dir():
        raise DataError(f"{root}: no algebras/ directory")
    entries = _load_entries(root)
    actions = _load_actions(root)
    arrows, unrealized, meta = _load_arrows(root)
    cat = Catalog(entries, actions, arrows, _load_tori(root), _load_errata(root), unrealized, root, meta)
    for e in entries.values():
        if e.action and e.action not in actions:
            raise DataError(f"{e.name}: action {e.action!r} has no data file")
    for a in actions.values():
        if a.algebra not in entries:
            raise DataError(f"action {a.name}: unknown algebra {a.algebra!r}")
    for f in arrows:
        for n in (f.source, f.target):
            if n not in entries:
                raise DataError(f"arrow {f.source}->{f.target}: unknown algebra {n!r}")
    if use_cache:
        _CACHE[key] = cat
    return cat


def heisenberg_example(a=1, alpha=0, beta=0, shift=0) -> tuple:
    """Left-symmetric product on the 3D Heisenberg algebra from its affine representation.

    Returns (product, bracket).  ``shift`` adds to the beta*x1 coefficient of the
    third row, which breaks X.Y - Y.X = [X, Y] whenever it is nonzero.
    """
    from .algebra import BilinearProduct

    a, alpha, beta, shift = (to_fraction(v) for v in (a, alpha, beta, shift))
    z = to_fraction(0)
    c = [
        [[a, a, alpha], [a, a, beta + shift], [z, z, z]],
        [[a, a, beta - 1], [a, a, alpha + 1], [z, z, z]],
        [[z, z, z], [z, z, z], [z, z, z]],
    ]
    bracket = [[[z] * 3 for _ in range(3)] for _ in range(3)]
    bracket[0][1][2] = to_fraction(1)
    bracket[1][0][2] = to_fraction(-1)
    return BilinearProduct(3, c, "heisenberg"), bracket
