import json
import shutil

import pytest

from abelaffine.catalog import DATA_ENV, DataError, default_data_dir, load_catalog


@pytest.fixture
def data_copy(tmp_path):
    dst = tmp_path / "data"
    shutil.copytree(default_data_dir(), dst)
    return dst


def test_counts_and_lookup(cat):
    assert len(cat.by_dim(2)) == 6 and len(cat.by_dim(3)) == 15
    assert not any(any(v) for plane in cat.algebra("mu15_3d").c for v in plane)
    assert cat.algebra("μ13_3d") is cat.algebra("MU13_3D")
    assert cat.resolve("a4_2d").name == "A4_2d"
    with pytest.raises(KeyError):
        cat.algebra("mu16_3d")


def test_expected_flags(cat):
    assert cat.expected_flags("A4_2d")["complete"].value is True
    assert cat.expected_flags("mu13_3d")["dim_h2s"].value == 7
    flags = cat.expected_flags("mu2_3d")
    assert flags["dim_h2s"].value == 0 and flags["rigid"].value is True
    for entry in cat.entries.values():
        assert all(e.citation for e in entry.expected.values())


def test_errata(cat):
    kinds = sorted(e.kind for e in cat.errata)
    assert kinds.count("action") == 2 and kinds.count("h2_dim") == 3
    assert cat.corrected_action("A3_2d").components[0].endswith("exp(a)*cos(b) - 1")
    assert cat.errata_for("A3_2d", "domain")[0].corrected["point"] == ["-1", "0"]


def test_arrow_roles(cat):
    assert len(cat.arrows_with_role("closure")) == 5
    assert len(cat.arrows_with_role("diagram")) == 12
    assert len(cat.arrows_with_role("supplementary")) == 2


def _edit(path, fn):
    doc = json.loads(path.read_text())
    fn(doc)
    path.write_text(json.dumps(doc))


def test_malformed_json(data_copy):
    (data_copy / "algebras" / "mu1_2d.json").write_text("{not json")
    with pytest.raises(DataError):
        load_catalog(data_copy, use_cache=False)


def test_non_associative_rejected(data_copy):
    _edit(data_copy / "algebras" / "mu4_2d.json", lambda d: d["products"].append([2, 2, [[1, "1"]]]))
    with pytest.raises(DataError, match="associative"):
        load_catalog(data_copy, use_cache=False)


def test_lower_triangle_rejected(data_copy):
    _edit(data_copy / "algebras" / "mu4_2d.json", lambda d: d["products"].append([2, 1, [[2, "0"]]]))
    with pytest.raises(DataError, match="i <= j"):
        load_catalog(data_copy, use_cache=False)


def test_duplicate_name(data_copy):
    shutil.copy(data_copy / "algebras" / "mu1_2d.json", data_copy / "algebras" / "zz_copy.json")
    with pytest.raises(DataError, match="duplicate"):
        load_catalog(data_copy, use_cache=False)


def test_dangling_reference(data_copy):
    _edit(data_copy / "actions" / "A1_2d.json", lambda d: d.update(algebra="mu99_2d"))
    with pytest.raises(DataError, match="unknown algebra"):
        load_catalog(data_copy, use_cache=False)


def test_env_override(data_copy, monkeypatch):
    monkeypatch.setenv(DATA_ENV, str(data_copy))
    assert default_data_dir() == data_copy
    assert load_catalog(use_cache=False).data_dir == data_copy
