import json

import pytest

from eprim import catalog
from eprim.catalog import (
    CatalogEntry,
    CatalogError,
    classical_order,
    load_group,
    load_lattice,
    nonconstructible,
)
from eprim.lattice import verify_lattice

GROUPS = ["a5", "a6", "a8", "aut_a6", "j1", "j3_2", "m10", "m12_2", "pgl2_9", "psu3_5_2", "s6", "s8"]
LATTICES = ["gamma1", "hoffman_singleton", "j1", "j3_2_weiss", "m12_2_weiss"] + [
    f"a6_row{i:02d}" for i in range(1, 12)
]


def _edit(path, fn):
    data = json.loads(path.read_text())
    fn(data)
    path.write_text(json.dumps(data))


def test_corpus_is_exactly_the_expected_set():
    assert catalog.list_groups() == GROUPS
    assert catalog.list_lattices() == sorted(LATTICES)
    assert {"ru", "on_2"} <= set(catalog.list_nonconstructible())


@pytest.mark.parametrize("name, degree, order", [
    ("aut_a6", 10, 1440),
    ("j1", 266, 175560),
    ("m12_2", 24, 190080),
    ("psu3_5_2", 50, 252000),
    ("a5", 5, 60),
    ("s8", 8, 40320),
])
def test_shipped_orders(name, degree, order):
    G, entry = load_group(name)
    assert (G.degree, G.order, entry.claimed_order) == (degree, order, order)


@pytest.mark.parametrize("name", GROUPS)
def test_entries_round_trip(name):
    path = catalog.catalog_dir() / "groups" / f"{name}.json"
    raw = json.loads(path.read_text())
    e1 = CatalogEntry.from_dict(raw)
    e2 = CatalogEntry.from_dict(json.loads(json.dumps(e1.to_dict())))
    assert e1 == e2
    assert e1.to_dict() == e2.to_dict()


@pytest.mark.parametrize("name", LATTICES)
def test_shipped_lattices_verify(name):
    assert verify_lattice(load_lattice(name)).passed


def test_m12_lattice_indices():
    L = load_lattice("m12_2_weiss")
    assert L.G.order // L.H.order == 440
    assert L.H.order // L.A.order == 4


def test_hoffman_singleton_indices():
    L = load_lattice("hoffman_singleton")
    assert L.G.degree == 50 and L.G.order == 252000
    assert (L.G.order // L.H.order, L.H.order // L.A.order) == (50, 7)


def test_wrong_claimed_order(tmp_catalog):
    _edit(tmp_catalog / "groups" / "j1.json", lambda d: d.update(claimed_order="175561"))
    with pytest.raises(CatalogError, match="175561"):
        load_group("j1")


def test_subgroup_generator_outside_parent(tmp_catalog):
    def tamper(d):
        d["subgroups"][0]["generators"] = ["(1,2)"]
    _edit(tmp_catalog / "groups" / "a6.json", tamper)
    with pytest.raises(CatalogError, match="not in"):
        load_group("a6")


def test_a_not_inside_h(tmp_catalog):
    _edit(tmp_catalog / "lattices" / "a6_row10.json", lambda d: d.update(A_ref="aut_a6/row9_A"))
    with pytest.raises(CatalogError, match="not contained"):
        load_lattice("a6_row10")


def test_unresolved_reference(tmp_catalog):
    _edit(tmp_catalog / "lattices" / "a6_row10.json", lambda d: d.update(E_ref="aut_a6/nope"))
    with pytest.raises(CatalogError, match="nope"):
        load_lattice("a6_row10")


@pytest.mark.parametrize("field", ["name", "schema_version", "generators"])
def test_schema_violation(tmp_catalog, field):
    _edit(tmp_catalog / "groups" / "a5.json", lambda d: d.pop(field))
    with pytest.raises(CatalogError):
        load_group("a5")


def test_missing_group():
    with pytest.raises(CatalogError):
        load_group("missing")


def test_metadata_only_entries_are_not_loadable():
    with pytest.raises(CatalogError):
        catalog.load_group_full(catalog.catalog_dir() / "nonconstructible" / "ru.json")


@pytest.mark.parametrize("name", ["ru", "on_2"])
def test_sporadic_index_arithmetic(name):
    nc = nonconstructible(name)
    assert nc.exact
    assert nc.index * nc.vertex_stabilizer_order == nc.order
    assert nc.index >= 12_000_000
    assert str(nc.index) in nc.arithmetic()


def test_ru_index():
    nc = nonconstructible("ru")
    assert (nc.order, nc.vertex_stabilizer_order, nc.index) == (145926144000, 12000, 12160512)


def test_every_metadata_entry_is_beyond_desk_scale():
    for name in catalog.list_nonconstructible():
        assert nonconstructible(name).index >= 12_000_000


@pytest.mark.parametrize("family, n, q, order", [
    ("PSL", 2, 7, 168),
    ("PSL", 3, 4, 20160),
    ("PSL", 2, 9, 360),
    ("PSU", 3, 3, 6048),
    ("PSU", 3, 5, 126000),
    ("PSU", 4, 2, 25920),
    ("POmega-", 8, 2, 197406720),
    ("POmega-", 4, 3, 360),
])
def test_classical_orders(family, n, q, order):
    assert classical_order(family, n, q) == order


def test_catalog_dir_override(tmp_catalog):
    assert catalog.catalog_dir() == tmp_catalog
    (tmp_catalog / "groups" / "a8.json").unlink()
    assert "a8" not in catalog.list_groups()
