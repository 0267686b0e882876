"""The shipped corpus of groups and lattices, and its JSON file formats."""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod
from pathlib import Path
from typing import Any

import jsonschema

from .group import PermGroup
from .lattice import Lattice
from .perm import CycleSyntaxError, Permutation, parse_cycles

__all__ = [
    "CatalogError",
    "CatalogEntry",
    "SubgroupEntry",
    "NonConstructible",
    "catalog_dir",
    "load_group",
    "load_lattice",
    "load_lattice_data",
    "lattice_from_data",
    "list_groups",
    "list_lattices",
    "list_nonconstructible",
    "nonconstructible",
    "classical_order",
    "SCHEMA_VERSION",
]

SCHEMA_VERSION = 1

_SUBGROUP_SCHEMA = {
    "type": "object",
    "required": ["name", "role", "generators", "claimed_order"],
    "properties": {
        "name": {"type": "string", "minLength": 1},
        "role": {"enum": ["E", "A", "H", "other"]},
        "generators": {"type": "array", "items": {"type": "string"}},
        "claimed_order": {"type": "string", "pattern": "^[1-9][0-9]*$"},
        "structure_label": {"type": "string"},
    },
}

GROUP_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "name", "degree", "generators", "claimed_order", "metadata"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string", "pattern": "^[a-z0-9_]+$"},
        "label": {"type": "string"},
        "degree": {"type": ["integer", "null"], "minimum": 1},
        "generators": {"type": "array", "items": {"type": "string"}},
        "claimed_order": {"type": ["string", "null"], "pattern": "^[1-9][0-9]*$"},
        "metadata": {
            "type": "object",
            "required": ["constructible"],
            "properties": {
                "socle": {"type": "string"},
                "almost_simple": {"type": "boolean"},
                "source": {"type": "string"},
                "constructible": {"type": "boolean"},
                "overgroup": {"type": "string"},
            },
        },
        "subgroups": {"type": "array", "items": _SUBGROUP_SCHEMA},
    },
}

LATTICE_SCHEMA = {
    "type": "object",
    "required": ["schema_version", "name", "group_ref", "E_ref", "A_ref", "H_ref", "expected"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "name": {"type": "string"},
        "group_ref": {"type": "string"},
        "E_ref": {"type": "string", "pattern": "^[a-z0-9_]+/[A-Za-z0-9_]+$"},
        "A_ref": {"type": "string", "pattern": "^[a-z0-9_]+/[A-Za-z0-9_]+$"},
        "H_ref": {"type": "string", "pattern": "^[a-z0-9_]+/[A-Za-z0-9_]+$"},
        "row": {"type": "integer"},
        "expected": {
            "type": "object",
            "properties": {
                "order": {"type": "integer"},
                "size": {"type": "integer"},
                "valency": {"type": "integer"},
                "girth": {"type": "integer"},
                "max_s": {"type": "integer"},
                "max_s_min": {"type": "integer"},
                "edge_primitive": {"type": "boolean"},
                "bipartite": {"type": "boolean"},
                "S_label": {"type": "string"},
            },
        },
    },
}


class CatalogError(ValueError):
    pass


def catalog_dir() -> Path:
    env = os.environ.get("CATALOG_DIR")
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


@dataclass
class SubgroupEntry:
    name: str
    role: str
    generators: list[str]
    claimed_order: int
    structure_label: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "role": self.role, "generators": list(self.generators),
                "claimed_order": str(self.claimed_order), "structure_label": self.structure_label}


@dataclass
class CatalogEntry:
    name: str
    degree: int | None
    generators: list[str]
    claimed_order: int | None
    metadata: dict[str, Any]
    subgroups: list[SubgroupEntry] = field(default_factory=list)
    label: str = ""

    @property
    def constructible(self) -> bool:
        return bool(self.metadata.get("constructible", True))

    def subgroup(self, name: str) -> SubgroupEntry:
        for s in self.subgroups:
            if s.name == name:
                return s
        raise CatalogError(f"group {self.name!r} has no subgroup {name!r}")

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CatalogEntry":
        try:
            jsonschema.validate(data, GROUP_SCHEMA)
        except jsonschema.ValidationError as exc:
            raise CatalogError(f"schema violation: {exc.message}") from None
        order = data["claimed_order"]
        return cls(
            name=data["name"], degree=data["degree"], generators=list(data["generators"]),
            claimed_order=int(order) if order is not None else None,
            metadata=dict(data["metadata"]), label=data.get("label", ""),
            subgroups=[SubgroupEntry(s["name"], s["role"], list(s["generators"]),
                                     int(s["claimed_order"]), s.get("structure_label", ""))
                       for s in data.get("subgroups", [])],
        )

    def to_dict(self) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION, "name": self.name, "label": self.label,
            "degree": self.degree, "generators": list(self.generators),
            "claimed_order": str(self.claimed_order) if self.claimed_order is not None else None,
            "metadata": dict(self.metadata),
            "subgroups": [s.to_dict() for s in self.subgroups],
        }


def _read_json(path: Path) -> dict[str, Any]:
    try:
        return json.loads(path.read_text())
    except FileNotFoundError:
        raise CatalogError(f"not found: {path}") from None
    except json.JSONDecodeError as exc:
        raise CatalogError(f"{path}: invalid JSON ({exc})") from None


def _group_path(ref: str | os.PathLike) -> Path:
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        return p
    return catalog_dir() / "groups" / f"{ref}.json"


def _lattice_path(ref: str | os.PathLike) -> Path:
    p = Path(ref)
    if p.suffix == ".json" or p.exists():
        return p
    return catalog_dir() / "lattices" / f"{ref}.json"


def _parse_all(texts: list[str], degree: int, what: str) -> list[Permutation]:
    out = []
    for t in texts:
        try:
            out.append(parse_cycles(t, degree))
        except CycleSyntaxError as exc:
            raise CatalogError(f"{what}: {exc}") from None
    return out


class LoadedGroup:
    """A verified catalog group together with its verified named subgroups."""

    def __init__(self, entry: CatalogEntry):
        if not entry.constructible:
            raise CatalogError(f"{entry.name!r} is metadata-only (non-constructible)")
        if entry.degree is None or not entry.generators or entry.claimed_order is None:
            raise CatalogError(f"{entry.name!r} lacks degree, generators or order")
        self.entry = entry
        gens = _parse_all(entry.generators, entry.degree, entry.name)
        G = PermGroup([g for g in gens if not g.is_identity()], entry.degree)
        if G.order != entry.claimed_order:
            raise CatalogError(f"{entry.name}: order {G.order} != claimed {entry.claimed_order}")
        self.group = G
        self.subgroups: dict[str, PermGroup] = {}
        for s in entry.subgroups:
            what = f"{entry.name}/{s.name}"
            sg = _parse_all(s.generators, entry.degree, what)
            for x in sg:
                if x not in G:
                    raise CatalogError(f"{what}: generator {x} is not in {entry.name}")
            S = PermGroup([x for x in sg if not x.is_identity()], entry.degree)
            if S.order != s.claimed_order:
                raise CatalogError(f"{what}: order {S.order} != claimed {s.claimed_order}")
            self.subgroups[s.name] = S

    def subgroup(self, name: str) -> PermGroup:
        if name not in self.subgroups:
            raise CatalogError(f"group {self.entry.name!r} has no subgroup {name!r}")
        return self.subgroups[name]


@lru_cache(maxsize=None)
def _load_cached(path: str, mtime: float) -> LoadedGroup:
    return LoadedGroup(CatalogEntry.from_dict(_read_json(Path(path))))


def load_group_full(ref: str | os.PathLike) -> LoadedGroup:
    path = _group_path(ref).resolve()
    if not path.exists():
        raise CatalogError(f"group not found: {ref}")
    return _load_cached(str(path), path.stat().st_mtime)


def load_group(ref: str | os.PathLike) -> tuple[PermGroup, CatalogEntry]:
    """Parse, verify and return a catalog group by name or path."""
    lg = load_group_full(ref)
    return lg.group, lg.entry


def load_lattice_data(ref: str | os.PathLike) -> dict[str, Any]:
    path = _lattice_path(ref)
    data = _read_json(path)
    try:
        jsonschema.validate(data, LATTICE_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise CatalogError(f"schema violation: {exc.message}") from None
    return data


def _resolve(ref: str, base: Path | None) -> PermGroup:
    gname, sname = ref.split("/")
    path = _group_path(gname)
    if base is not None and not path.exists():
        path = base / f"{gname}.json"
    return load_group_full(path).subgroup(sname)


def lattice_from_data(data: dict[str, Any], strict: bool = True) -> Lattice:
    """Resolve references and check containments; raises CatalogError on failure.

    With ``strict=False`` only references and degrees are checked, leaving the
    lattice conditions to ``verify_lattice``.
    """
    G = load_group_full(data["group_ref"]).group
    E, A, H = (_resolve(data[k], None) for k in ("E_ref", "A_ref", "H_ref"))
    name = data["name"]
    if any(X.degree != G.degree for X in (E, A, H)):
        raise CatalogError(f"{name}: subgroup degrees differ from the group degree {G.degree}")
    if strict:
        for label, X, Y in (("E", E, G), ("H", H, G), ("A", A, E), ("A", A, H)):
            if not X.is_subgroup_of(Y):
                outer = "G" if Y is G else ("E" if Y is E else "H")
                raise CatalogError(f"{name}: {label} is not contained in {outer}")
        if E.order != 2 * A.order:
            raise CatalogError(f"{name}: |E:A| = {E.order}/{A.order} is not 2")
    expected = dict(data.get("expected", {}))
    L = Lattice(G, E, A, H, name=name, S_label=expected.get("S_label"), expected=expected)
    L.notes["group_ref"] = data["group_ref"]
    if "row" in data:
        L.notes["row"] = data["row"]
    return L


def load_lattice(ref: str | os.PathLike) -> Lattice:
    return lattice_from_data(load_lattice_data(ref))


def list_groups() -> list[str]:
    return sorted(p.stem for p in (catalog_dir() / "groups").glob("*.json"))


def list_lattices() -> list[str]:
    return sorted(p.stem for p in (catalog_dir() / "lattices").glob("*.json"))


def list_nonconstructible() -> list[str]:
    return sorted(p.stem for p in (catalog_dir() / "nonconstructible").glob("*.json"))


# -- metadata-only entries -------------------------------------------------------

def classical_order(family: str, n: int, q: int) -> int:
    """Order of the simple classical group PSL_n(q), PSU_n(q) or POmega^-_n(q) (n even)."""
    if family == "PSL":
        return q ** (n * (n - 1) // 2) * prod(q ** i - 1 for i in range(2, n + 1)) // gcd(n, q - 1)
    if family == "PSU":
        return (q ** (n * (n - 1) // 2) * prod(q ** i - (-1) ** i for i in range(2, n + 1))
                // gcd(n, q + 1))
    if family == "POmega-":
        m = n // 2
        return (q ** (m * (m - 1)) * (q ** m + 1) * prod(q ** (2 * i) - 1 for i in range(1, m))
                // gcd(4, q ** m + 1))
    raise ValueError(f"unknown family {family}")


@dataclass
class NonConstructible:
    name: str
    label: str
    order: int
    vertex_stabilizer_order: int
    exact: bool

    @property
    def index(self) -> int:
        return self.order // self.vertex_stabilizer_order

    def arithmetic(self) -> str:
        rel = "=" if self.exact else ">="
        what = "|G|" if self.exact else "|T|"
        return (f"|G:H| {rel} {what}/|H| = {self.order}/{self.vertex_stabilizer_order}"
                f" = {self.index}")


def nonconstructible(ref: str) -> NonConstructible:
    path = Path(ref) if Path(ref).suffix == ".json" else catalog_dir() / "nonconstructible" / f"{ref}.json"
    entry = CatalogEntry.from_dict(_read_json(path))
    meta = entry.metadata
    h = int(meta["lattice"]["H_order"])
    if entry.claimed_order is not None:
        return NonConstructible(entry.name, entry.label, entry.claimed_order, h, True)
    fam = meta["family"]
    order = classical_order(fam["type"], fam["n"], fam["smallest_q"])
    label = f"{entry.label} (smallest q = {fam['smallest_q']})"
    return NonConstructible(entry.name, label, order, h, False)
