"""Coset graphs Cos(G, H, HgH) with the acting group attached."""

from __future__ import annotations

import json
from collections import deque
from typing import Any, Sequence

import numpy as np

from .group import DEFAULT_INDEX_CAP, CosetAction, PermGroup, coset_action
from .perm import Permutation, point_dtype

__all__ = [
    "Graph",
    "GraphBuildError",
    "build_graph",
    "build_from_lattice",
    "choose_g",
]


class GraphBuildError(ValueError):
    pass


class Graph:
    """Simple undirected graph on 0..n-1 with sorted adjacency lists.

    ``action`` holds one vertex permutation per generator of the acting group;
    ``group_order`` is the order of the group they generate, when known.
    """

    def __init__(self, adjacency: Sequence[Sequence[int]], action: Sequence[Permutation] | None = None,
                 group_order: int | None = None, coset_action: CosetAction | None = None,
                 check: bool = True):
        self.adjacency: tuple[tuple[int, ...], ...] = tuple(tuple(sorted(int(u) for u in row))
                                                            for row in adjacency)
        self.vertex_count = len(self.adjacency)
        self.action = list(action) if action is not None else None
        self.group_order = group_order
        self.coset_action = coset_action
        self._group: PermGroup | None = None
        if check:
            self._check()

    def _check(self) -> None:
        n = self.vertex_count
        sets = [set(r) for r in self.adjacency]
        for v, row in enumerate(self.adjacency):
            if len(set(row)) != len(row):
                raise GraphBuildError(f"repeated neighbor at vertex {v}")
            for u in row:
                if not 0 <= u < n or u == v:
                    raise GraphBuildError(f"bad neighbor {u} of vertex {v}")
                if v not in sets[u]:
                    raise GraphBuildError(f"adjacency not symmetric at edge {v}-{u}")
        if self.action is not None:
            for k, g in enumerate(self.action):
                if g.degree != n:
                    raise GraphBuildError("action degree differs from vertex count")
                img = g.images
                for v, row in enumerate(self.adjacency):
                    if sorted(img[u] for u in row) != list(self.adjacency[img[v]]):
                        raise GraphBuildError(f"generator {k} is not an automorphism")

    # -- basic data -------------------------------------------------------
    @property
    def size(self) -> int:
        return sum(len(r) for r in self.adjacency) // 2

    def degrees(self) -> list[int]:
        return [len(r) for r in self.adjacency]

    @property
    def valency(self) -> int | None:
        ds = set(self.degrees())
        return ds.pop() if len(ds) == 1 else None

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.adjacency[u]
        i = np.searchsorted(row, v)
        return i < len(row) and row[i] == v

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u, row in enumerate(self.adjacency) for v in row if u < v]

    def edge_array(self) -> np.ndarray:
        e = self.edges()
        return np.array(e, dtype=np.int64).reshape(len(e), 2)

    def is_connected(self) -> bool:
        if self.vertex_count == 0:
            return True
        seen = bytearray(self.vertex_count)
        seen[0] = 1
        queue = deque([0])
        count = 1
        while queue:
            v = queue.popleft()
            for u in self.adjacency[v]:
                if not seen[u]:
                    seen[u] = 1
                    count += 1
                    queue.append(u)
        return count == self.vertex_count

    def action_group(self) -> PermGroup:
        """Group generated by the attached action, on the vertices."""
        if self.action is None:
            raise ValueError("graph has no attached action")
        if self._group is None:
            gens = [g for g in self.action if not g.is_identity()]
            self._group = PermGroup(gens, self.vertex_count, order_bound=self.group_order)
            if self.group_order is None:
                self.group_order = self._group.order
        return self._group

    def with_action(self, action: Sequence[Permutation], group_order: int | None = None) -> "Graph":
        g = Graph(self.adjacency, action, group_order, check=False)
        g._check_action_only()
        return g

    def _check_action_only(self) -> None:
        adj = self.adjacency
        for k, g in enumerate(self.action or []):
            img = g.images
            for v, row in enumerate(adj):
                if sorted(img[u] for u in row) != list(adj[img[v]]):
                    raise GraphBuildError(f"generator {k} is not an automorphism")

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Graph with vertex v renamed perm[v]."""
        n = self.vertex_count
        adj: list[list[int]] = [[] for _ in range(n)]
        for v, row in enumerate(self.adjacency):
            adj[perm[v]] = [perm[u] for u in row]
        return Graph(adj)

    # -- export -------------------------------------------------------------
    def to_text(self) -> str:
        lines = [f"{self.vertex_count} {self.size}"]
        lines += [" ".join(map(str, row)) for row in self.adjacency]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        lines = text.splitlines()
        n, m = map(int, lines[0].split())
        rows = [list(map(int, ln.split())) for ln in lines[1:n + 1]]
        if len(rows) != n:
            raise ValueError(f"expected {n} adjacency lines, got {len(rows)}")
        g = cls(rows)
        if g.size != m:
            raise ValueError(f"header says {m} edges, adjacency has {g.size}")
        return g

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"vertices": self.vertex_count, "edges": self.size,
                             "adjacency": [list(r) for r in self.adjacency]}
        if self.action is not None:
            d["action"] = [list(g.images) for g in self.action]
            d["group_order"] = str(self.group_order) if self.group_order is not None else None
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(",", ":"), sort_keys=True) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Graph":
        d = json.loads(text)
        action = [Permutation(a) for a in d["action"]] if d.get("action") is not None else None
        order = int(d["group_order"]) if d.get("group_order") else None
        return cls(d["adjacency"], action, order)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.adjacency == other.adjacency

    def __repr__(self) -> str:
        return f"<Graph n={self.vertex_count} m={self.size}>"


def build_graph(G: PermGroup, H: PermGroup, g: Permutation, *, cap: int = DEFAULT_INDEX_CAP,
                allow_disconnected: bool = False, action: CosetAction | None = None) -> Graph:
    """Cos(G, H, HgH): right cosets of H, Hx ~ Hy iff x y^-1 in HgH."""
    if g not in G:
        raise GraphBuildError("g is not in G")
    if g in H:
        raise GraphBuildError("g lies in H: the graph would have loops")
    if g * g not in H:
        raise GraphBuildError("g^2 is not in H: adjacency would not be symmetric")
    ca = action or coset_action(G, H, cap)
    n = ca.degree
    # neighbours of coset H: the H-orbit of Hg
    start = ca.coset_of(g)
    reps = {start: g}
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            x = reps[c]
            for h in H.generators:
                y = x * h
                d = ca.coset_of(y)
                if d not in reps:
                    reps[d] = y
                    nxt.append(d)
        frontier = nxt
    base = np.array(sorted(reps), dtype=np.int64)
    d = len(base)
    adj = np.empty((n, d), dtype=np.int64)
    adj[0] = base
    imgs = [p.array.astype(np.int64) for p in ca.generator_images]
    for v, (parent, k) in enumerate(ca.schreier_tree()):
        if v:
            adj[v] = imgs[k][adj[parent]]
    adj.sort(axis=1)
    # symmetry: count of each directed pair must match its reverse
    src = np.repeat(np.arange(n), d)
    fwd = src * n + adj.ravel()
    rev = np.sort(adj.ravel() * n + src)
    if not np.array_equal(np.sort(fwd), rev):
        raise GraphBuildError("adjacency is not symmetric")
    graph = Graph(adj.tolist(), ca.generator_images, ca.image.order, ca, check=False)
    if not allow_disconnected and not graph.is_connected():
        raise GraphBuildError("coset graph is disconnected (<H, g> != G)")
    return graph


def choose_g(E: PermGroup, A: PermGroup) -> Permutation:
    """First element of E outside A, scanning strong generators then transversal products."""
    for x in list(E.generators) + E.strong_generators:
        if x not in A:
            return x
    for lvl, orbit in enumerate(E.basic_orbits):
        for p in orbit:
            x = E.transversal_element(lvl, p)
            if x not in A:
                return x
    raise GraphBuildError("E is contained in A")


def build_from_lattice(L, *, verify: bool = False, g: Permutation | None = None,
                       cap: int = DEFAULT_INDEX_CAP, action: CosetAction | None = None) -> Graph:
    """The coset graph of a lattice, with valency and edge count cross-checked."""
    if verify:
        from .lattice import verify_lattice

        rep = verify_lattice(L, cap)
        if not rep.passed:
            names = ", ".join(r.name for r in rep.failures())
            raise GraphBuildError(f"lattice verification failed: {names}")
    if g is None:
        g = choose_g(L.E, L.A)
    elif g not in L.E or g in L.A:
        raise GraphBuildError("g must lie in E but not in A")
    graph = build_graph(L.G, L.H, g, cap=cap, action=action)
    d = L.H.order // L.A.order
    if graph.valency != d:
        raise GraphBuildError(f"valency {graph.valency} differs from |H:A| = {d}")
    if graph.size != L.G.order // L.E.order:
        raise GraphBuildError(f"edge count {graph.size} differs from |G:E| = {L.G.order // L.E.order}")
    return graph
