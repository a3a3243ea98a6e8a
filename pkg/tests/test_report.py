from fractions import Fraction

import pytest

from abelaffine.report import SCHEMA, VERDICTS, _Builder, failed, name_key, to_json, to_markdown


def tiny_report():
    b = _Builder()
    b.add("flags", "mu1_2d", "has_unit", "unit table", True, True)
    b.add("cohomology", "mu9_3d", "dim_h2s", "H^2 table", 3, 2, "erratum", erratum="mu9_3d.dim_h2s")
    b.add("arrows", "x in closure of y", "exact_limit", "diagram", True, "trace identity", "unrealized")
    b.add("tori", "Gamma1", "closure", "torus theorem", True, False)
    summary = {v: sum(c["verdict"] == v for c in b.claims) for v in VERDICTS}
    summary["claims"] = len(b.claims)
    return {"schema": SCHEMA, "version": "x", "summary": summary, "claims": b.claims, "tables": {"fingerprints": {}}}


def test_verdicts():
    rep = tiny_report()
    assert [c["verdict"] for c in rep["claims"]] == ["match", "erratum", "unrealized", "mismatch"]
    assert [c["id"] for c in failed(rep)] == ["tori/Gamma1/closure"]


def test_citation_required():
    with pytest.raises(ValueError):
        _Builder().add("flags", "a", "b", "", 1, 1)


def test_exact_values_serialize():
    b = _Builder()
    row = b.add("s", "a", "p", "c", Fraction(1, 2), [Fraction(3), 0.1234567891])
    assert row["expected"] == "1/2" and row["computed"] == [3, 0.123457]


def test_renderings_are_stable():
    rep = tiny_report()
    assert to_json(rep) == to_json(tiny_report())
    md = to_markdown(rep)
    assert "## cohomology" in md and "| mu9_3d | dim_h2s | 3 | 2 | erratum |" in md


def test_name_order():
    names = ["mu10_3d", "mu2_3d", "mu1_2d", "A10_3d", "A9_3d"]
    assert sorted(names, key=name_key) == ["mu1_2d", "A9_3d", "A10_3d", "mu2_3d", "mu10_3d"]
