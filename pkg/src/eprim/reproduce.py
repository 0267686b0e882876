"""One-shot reproduction targets with PASS / FAIL / SKIPPED manifests."""

from __future__ import annotations

import itertools
import multiprocessing
import time
from dataclasses import dataclass, field
from typing import Any, Callable

from . import catalog
from .cosetgraph import build_from_lattice
from .graphprops import (
    basic_invariants,
    is_edge_primitive,
    is_vertex_biprimitive,
    isomorphic,
    local_action,
    s_arc_transitivity,
)
from .group import DEFAULT_INDEX_CAP
from .lattice import Lattice, conjugating_element, find_lattices, verify_lattice

__all__ = ["Check", "Manifest", "TARGETS", "run_target", "reproduce", "skipped_entries"]

PASS, FAIL, SKIPPED = "PASS", "FAIL", "SKIPPED"

A6_GROUPS = ["a6", "s6", "m10", "pgl2_9", "aut_a6"]
J3_BUDGET = 30 * 60


@dataclass
class Check:
    name: str
    status: str
    expected: Any = None
    actual: Any = None

    def to_dict(self) -> dict[str, Any]:
        return {"name": self.name, "status": self.status, "expected": self.expected,
                "actual": self.actual}


@dataclass
class Manifest:
    target: str
    checks: list[Check] = field(default_factory=list)
    note: str = ""
    skipped: bool = False
    seconds: float = 0.0

    @property
    def status(self) -> str:
        if self.skipped:
            return SKIPPED
        if not self.checks or any(c.status == FAIL for c in self.checks):
            return FAIL
        return PASS

    def expect(self, name: str, expected: Any, actual: Any) -> bool:
        ok = expected == actual
        self.checks.append(Check(name, PASS if ok else FAIL, expected, actual))
        return ok

    def require(self, name: str, ok: bool, actual: Any = None) -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, True, actual if actual is not None else ok))
        return ok

    def to_dict(self) -> dict[str, Any]:
        return {"target": self.target, "status": self.status, "note": self.note,
                "checks": [c.to_dict() for c in self.checks]}


def _graph_checks(m: Manifest, L: Lattice, prefix: str = "", cap: int = DEFAULT_INDEX_CAP):
    exp = L.expected
    rep = verify_lattice(L, cap)
    m.require(f"{prefix}lattice conditions", rep.passed,
              "ok" if rep.passed else ", ".join(r.name for r in rep.failures()))
    graph = build_from_lattice(L, cap=cap)
    inv = basic_invariants(graph)
    for key, actual in (("order", inv.order), ("size", inv.size), ("valency", inv.valency),
                        ("bipartite", inv.bipartite)):
        if exp.get(key) is not None:
            m.expect(f"{prefix}{key}", exp[key], actual)
    if exp.get("girth") is not None:
        m.expect(f"{prefix}girth", exp["girth"], inv.to_dict()["girth"])
    if exp.get("edge_primitive") is not None:
        m.expect(f"{prefix}edge_primitive", exp["edge_primitive"], is_edge_primitive(graph))
    need_arcs = any(k in exp for k in ("max_s", "max_s_min", "two_arc_stabilizer"))
    if need_arcs:
        sa = s_arc_transitivity(graph)
        if "max_s" in exp:
            m.expect(f"{prefix}max_s", exp["max_s"], sa.max_s)
        if "max_s_min" in exp:
            m.checks.append(Check(f"{prefix}max_s >= {exp['max_s_min']}",
                                  PASS if sa.max_s is not None and sa.max_s >= exp["max_s_min"] else FAIL,
                                  exp["max_s_min"], sa.max_s))
        if "two_arc_stabilizer" in exp:
            m.expect(f"{prefix}2-arc stabilizer order", exp["two_arc_stabilizer"], sa.stabilizer_order(2))
    if "local_two_transitive" in exp:
        m.expect(f"{prefix}local action 2-transitive", exp["local_two_transitive"],
                 local_action(graph).two_transitive)
    if "biprimitive" in exp:
        m.expect(f"{prefix}vertex-biprimitive", exp["biprimitive"], is_vertex_biprimitive(graph))
    return graph, inv


def _lattice_target(target: str, lattice: str) -> Callable[[int], Manifest]:
    def run(cap: int) -> Manifest:
        m = Manifest(target)
        L = catalog.load_lattice(lattice)
        _graph_checks(m, L, cap=cap)
        return m
    return run


def _a6_table(cap: int) -> Manifest:
    m = Manifest("a6-table")
    X, _ = catalog.load_group("aut_a6")
    shipped = [catalog.load_lattice(f"a6_row{i:02d}") for i in range(1, 12)]
    found: dict[str, list[Lattice]] = {}
    for name in A6_GROUPS:
        G, entry = catalog.load_group(name)
        over = entry.metadata.get("overgroup")
        found[name] = find_lattices(G, catalog.load_group(over)[0] if over else None)
    m.expect("lattices discovered", 11, sum(len(v) for v in found.values()))
    for L in shipped:
        row = L.notes["row"]
        gname = L.notes["group_ref"]
        hits = [F for F in found[gname] if conjugating_element(L, F, X) is not None]
        m.expect(f"row {row} rediscovered ({gname}, orders {L.orders()})", 1, len(hits))
    graphs = {}
    for L in shipped:
        row = L.notes["row"]
        graphs[row], inv = _graph_checks(m, L, prefix=f"row {row}: ", cap=cap)
        kind = L.expected.get("kind")
        if kind in ("K6", "K10"):
            m.expect(f"row {row}: complete graph {kind}", (True, int(kind[1:])), (inv.complete, inv.order))
        elif kind == "K6,6":
            m.expect(f"row {row}: complete bipartite K6,6", (True, 12), (inv.complete_bipartite, inv.order))
    cage_rows = [L.notes["row"] for L in shipped if L.expected.get("kind") == "tutte_8_cage"]
    for a, b in itertools.combinations(cage_rows, 2):
        m.expect(f"rows {a} and {b} isomorphic", True, isomorphic(graphs[a], graphs[b])[0])
    return m


def _gamma0(cap: int) -> Manifest:
    m = Manifest("gamma0", note="Tutte's 8-cage from the Aut(A6) lattice")
    L = catalog.load_lattice("a6_row10")
    _graph_checks(m, L, cap=cap)
    return m


TARGETS: dict[str, Callable[[int], Manifest]] = {
    "a6-table": _a6_table,
    "gamma0": _gamma0,
    "gamma1": _lattice_target("gamma1", "gamma1"),
    "m12": _lattice_target("m12", "m12_2_weiss"),
    "j1": _lattice_target("j1", "j1"),
    "hoffman-singleton": _lattice_target("hoffman-singleton", "hoffman_singleton"),
    "j3": _lattice_target("j3", "j3_2_weiss"),
}
STRETCH = {"j3": J3_BUDGET}


def run_target(name: str, cap: int = DEFAULT_INDEX_CAP) -> Manifest:
    if name not in TARGETS:
        raise KeyError(f"unknown target {name!r}")
    t0 = time.perf_counter()
    try:
        m = TARGETS[name](cap)
    except Exception as exc:  # a crash is a failed check, not a harness error
        m = Manifest(name)
        m.checks.append(Check("pipeline", FAIL, "completes", f"{type(exc).__name__}: {exc}"))
    m.seconds = time.perf_counter() - t0
    return m


def skipped_entries(cap: int = DEFAULT_INDEX_CAP) -> list[Manifest]:
    out = []
    for name in catalog.list_nonconstructible():
        nc = catalog.nonconstructible(name)
        m = Manifest(f"skip:{name}", skipped=True,
                     note=f"{nc.label}: non-constructible at desk scale; {nc.arithmetic()}")
        m.checks.append(Check("coset index above cap", SKIPPED, f"> {cap}", nc.index))
        out.append(m)
    return out


def _run_with_budget(name: str, cap: int, budget: float) -> Manifest:
    ctx = multiprocessing.get_context("fork")
    with ctx.Pool(1) as pool:
        res = pool.apply_async(run_target, (name, cap))
        try:
            return res.get(timeout=budget)
        except multiprocessing.TimeoutError:
            pool.terminate()
            return Manifest(name, skipped=True, seconds=budget,
                            note=f"did not finish within {budget:.0f} s")


def reproduce(targets: list[str], jobs: int = 1, cap: int = DEFAULT_INDEX_CAP,
              budgets: dict[str, float] | None = None) -> list[Manifest]:
    """Run targets ("all" expands to every target plus the skipped entries)."""
    budgets = dict(STRETCH, **(budgets or {}))
    include_skips = "all" in targets
    names = list(TARGETS) if include_skips else list(dict.fromkeys(targets))
    for n in names:
        if n not in TARGETS:
            raise KeyError(f"unknown target {n!r}")
    results: dict[str, Manifest] = {}
    plain = [n for n in names if n not in budgets]
    if jobs > 1 and len(plain) > 1:
        ctx = multiprocessing.get_context("fork")
        with ctx.Pool(min(jobs, len(plain))) as pool:
            for n, m in zip(plain, pool.starmap(run_target, [(n, cap) for n in plain])):
                results[n] = m
    else:
        for n in plain:
            results[n] = run_target(n, cap)
    for n in names:
        if n in budgets:
            results[n] = _run_with_budget(n, cap, budgets[n])
    out = [results[n] for n in names]
    if include_skips:
        out += skipped_entries(cap)
    return out
