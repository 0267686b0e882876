"""Graph predicates: invariants, edge action, s-arc transitivity, local action, isomorphism."""

from __future__ import annotations

import math
from collections import Counter, deque
from dataclasses import asdict, dataclass, field
from typing import Any, Sequence

import numpy as np

from .cosetgraph import Graph
from .group import PermGroup, is_biprimitive, is_primitive, orbits_of, stabilizer
from .perm import Permutation, point_dtype

__all__ = [
    "Invariants",
    "EdgeAction",
    "SArcResult",
    "LocalAction",
    "basic_invariants",
    "girth",
    "is_bipartite",
    "edge_action",
    "is_edge_primitive",
    "is_vertex_biprimitive",
    "s_arc_transitivity",
    "local_action",
    "isomorphic",
    "count_triangles",
    "count_four_cycles",
]


@dataclass(frozen=True)
class Invariants:
    order: int
    size: int
    connected: bool
    valency: int | None
    bipartite: bool
    girth: float
    complete: bool
    complete_bipartite: bool

    def to_dict(self) -> dict[str, Any]:
        d = asdict(self)
        d["girth"] = None if math.isinf(self.girth) else int(self.girth)
        return d


def _bfs_girth_from(adj: Sequence[Sequence[int]], root: int, bound: float) -> float:
    n = len(adj)
    dist = [-1] * n
    parent = [-1] * n
    dist[root] = 0
    queue = deque([root])
    best = bound
    while queue:
        v = queue.popleft()
        if 2 * dist[v] + 1 >= best:
            break
        for u in adj[v]:
            if dist[u] < 0:
                dist[u] = dist[v] + 1
                parent[u] = v
                queue.append(u)
            elif u != parent[v]:
                best = min(best, dist[u] + dist[v] + 1)
    return best


def girth(g: Graph, vertex_transitive: bool | None = None) -> float:
    """Length of a shortest cycle (inf for forests).

    For a vertex-transitive graph one breadth-first search from vertex 0 suffices.
    """
    if vertex_transitive is None:
        vertex_transitive = g.action is not None and _transitive(g)
    roots = [0] if vertex_transitive and g.vertex_count else range(g.vertex_count)
    best = math.inf
    for r in roots:
        best = _bfs_girth_from(g.adjacency, r, best)
    return best


def _transitive(g: Graph) -> bool:
    return len(orbits_of(g.action, g.vertex_count)) == 1


def is_bipartite(g: Graph) -> bool:
    color = [-1] * g.vertex_count
    for s in range(g.vertex_count):
        if color[s] >= 0:
            continue
        color[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            for u in g.adjacency[v]:
                if color[u] < 0:
                    color[u] = 1 - color[v]
                    queue.append(u)
                elif color[u] == color[v]:
                    return False
    return True


def _sides(g: Graph) -> list[int]:
    color = [-1] * g.vertex_count
    for s in range(g.vertex_count):
        if color[s] < 0:
            color[s] = 0
            queue = deque([s])
            while queue:
                v = queue.popleft()
                for u in g.adjacency[v]:
                    if color[u] < 0:
                        color[u] = 1 - color[v]
                        queue.append(u)
    return color


def basic_invariants(g: Graph) -> Invariants:
    n, m = g.vertex_count, g.size
    connected = g.is_connected()
    bip = is_bipartite(g)
    complete = m == n * (n - 1) // 2 and n > 0
    cb = False
    if bip and connected and n > 1:
        side = _sides(g)
        a = sum(1 for c in side if c == 0)
        cb = m == a * (n - a)
    return Invariants(n, m, connected, g.valency, bip, girth(g), complete, cb)


def count_triangles(g: Graph) -> int:
    sets = [set(r) for r in g.adjacency]
    total = 0
    for u, row in enumerate(g.adjacency):
        for v in row:
            if u < v:
                total += len(sets[u] & sets[v])
    return total // 3


def count_four_cycles(g: Graph) -> int:
    pairs: Counter = Counter()
    for row in g.adjacency:
        for i in range(len(row)):
            for j in range(i + 1, len(row)):
                pairs[row[i], row[j]] += 1
    return sum(c * (c - 1) // 2 for c in pairs.values()) // 2


# -- edge action ------------------------------------------------------------------

@dataclass
class EdgeAction:
    edges: np.ndarray
    generators: list[Permutation]
    group: PermGroup

    @property
    def degree(self) -> int:
        return len(self.edges)


def _vertex_order(g: Graph) -> int:
    return g.action_group().order


def edge_action(g: Graph) -> EdgeAction:
    """Induced action on edges, indexed by sorted endpoint pairs in lexicographic order."""
    if g.action is None:
        raise ValueError("graph has no attached action")
    n = g.vertex_count
    edges = g.edge_array()
    codes = edges[:, 0] * n + edges[:, 1]
    gens = []
    for k, p in enumerate(g.action):
        img = p.array.astype(np.int64)[edges]
        img.sort(axis=1)
        c = img[:, 0] * n + img[:, 1]
        pos = np.searchsorted(codes, c)
        pos[pos >= len(codes)] = 0
        if not np.array_equal(codes[pos], c):
            raise ValueError(f"generator {k} maps an edge to a non-edge")
        gens.append(Permutation._wrap(pos.astype(point_dtype(len(edges)))))
    nontrivial = [x for x in gens if not x.is_identity()]
    group = PermGroup(nontrivial, len(edges), order_bound=_vertex_order(g))
    return EdgeAction(edges, gens, group)


def is_edge_primitive(g: Graph) -> bool:
    ea = edge_action(g)
    return is_primitive(ea.group)


def is_vertex_biprimitive(g: Graph) -> bool:
    return is_biprimitive(g.action_group())


# -- s-arcs ------------------------------------------------------------------------

@dataclass
class SArcResult:
    max_s: int | None
    arc: list[int]
    stabilizer_orders: list[int] = field(default_factory=list)
    group_order: int = 0

    def stabilizer_order(self, s: int) -> int:
        """Order of the pointwise stabilizer of the canonical s-arc (s = 0: a vertex)."""
        return self.stabilizer_orders[s]

    def to_dict(self) -> dict[str, Any]:
        return {"max_s": self.max_s, "arc": self.arc, "group_order": self.group_order,
                "stabilizer_orders": self.stabilizer_orders}


def canonical_arc(g: Graph, length: int) -> list[int]:
    """Lexicographically least walk without backtracking, starting at 0."""
    arc = [0]
    prev = -1
    while len(arc) <= length:
        v = arc[-1]
        nxt = [u for u in g.adjacency[v] if u != prev]
        if not nxt:
            break
        prev = v
        arc.append(nxt[0])
    return arc


def s_arc_transitivity(g: Graph, max_depth: int = 12) -> SArcResult:
    """Largest s with the attached group transitive on s-arcs.

    Level k of a stabilizer chain whose base is the canonical arc holds the orbit
    of v_k under the stabilizer of v_0..v_{k-1}; the group is transitive on k-arcs
    iff that orbit is the full set of extensions N(v_{k-1}) minus v_{k-2}.
    """
    G = g.action_group()
    n = g.vertex_count
    d = g.valency
    if d is None or d < 2:
        raise ValueError("s-arc transitivity needs a regular graph of valency >= 2")
    if not g.is_connected():
        raise ValueError("s-arc transitivity needs a connected graph")
    if len(G.orbit(0)) != n:
        return SArcResult(-1, [0], [], G.order)
    if d == 2:
        # cycles: arc-transitive implies s-arc-transitive for every s
        stab = stabilizer(G, [0])
        ok = set(stab.orbit(g.adjacency[0][0])) == set(g.adjacency[0])
        return SArcResult(None if ok else 0, [0], [stab.order], G.order)
    arc = canonical_arc(g, max_depth)
    base: list[int] = []
    for v in arc:
        if v in base:
            break
        base.append(v)
    chain = G.with_base(base)
    orbits = chain.basic_orbits
    # arc_orders[s] = order of the pointwise stabilizer of v_0..v_s
    arc_orders = []
    stab_order = G.order
    for orb in orbits[:len(base)]:
        stab_order //= len(orb)
        arc_orders.append(stab_order)
    max_s = 0
    for k in range(1, len(base)):
        want = set(g.adjacency[base[k - 1]]) - ({base[k - 2]} if k >= 2 else set())
        if set(orbits[k]) != want:
            break
        max_s = k
    for s in range(1, max_s + 1):
        count = n * d * (d - 1) ** (s - 1)
        if G.order != count * arc_orders[s]:
            raise AssertionError(f"orbit count mismatch at level {s}")
    return SArcResult(max_s, arc[:max_s + 1], arc_orders[:max_s + 2], G.order)


# -- local action -------------------------------------------------------------------

@dataclass
class LocalAction:
    vertex: int
    neighbor_order: list[int]
    induced_generators: list[Permutation]
    induced_order: int
    stabilizer_order: int
    kernel_order: int
    two_transitive: bool

    @property
    def faithful(self) -> bool:
        return self.kernel_order == 1

    def to_dict(self) -> dict[str, Any]:
        return {"vertex": self.vertex, "neighbors": self.neighbor_order,
                "induced_order": self.induced_order, "stabilizer_order": self.stabilizer_order,
                "kernel_order": self.kernel_order, "faithful": self.faithful,
                "two_transitive": self.two_transitive}


def local_action(g: Graph, v: int = 0) -> LocalAction:
    G = g.action_group()
    Gv = stabilizer(G, [v])
    nbrs = list(g.adjacency[v])
    pos = {u: i for i, u in enumerate(nbrs)}
    d = len(nbrs)
    induced = []
    for h in Gv.generators:
        img = h.images
        induced.append(Permutation([pos[img[u]] for u in nbrs]))
    nontrivial = [x for x in induced if not x.is_identity()]
    L = PermGroup(nontrivial, d) if d else None
    order = L.order if L else 1
    # orbit of one ordered pair of distinct neighbours
    two = False
    if d >= 2:
        lists = [x.images for x in nontrivial]
        seen = {(0, 1)}
        queue = [(0, 1)]
        while queue:
            a, b = queue.pop()
            for img in lists:
                p = (img[a], img[b])
                if p not in seen:
                    seen.add(p)
                    queue.append(p)
        two = len(seen) == d * (d - 1)
    return LocalAction(v, nbrs, induced, order, Gv.order, Gv.order // order, two)


# -- isomorphism ----------------------------------------------------------------------

def _invariant_vector(g: Graph) -> tuple:
    inv = basic_invariants(g)
    return (inv.order, inv.size, tuple(sorted(g.degrees())), inv.girth, inv.bipartite,
            count_triangles(g), count_four_cycles(g))


def _refine(adj: Sequence[Sequence[int]], colors: list[int]) -> tuple[list[int], list]:
    """Equitable refinement; returns canonical colours and a trace for comparison."""
    trace = []
    ncolors = len(set(colors))
    while True:
        sig = [(colors[v], tuple(sorted(colors[u] for u in adj[v]))) for v in range(len(adj))]
        uniq = sorted(set(sig))
        rank = {s: i for i, s in enumerate(uniq)}
        colors = [rank[s] for s in sig]
        trace.append(tuple(uniq))
        if len(uniq) == ncolors:
            return colors, trace
        ncolors = len(uniq)


def _individualize(colors: list[int], v: int) -> list[int]:
    # v becomes its own cell, placed just before the rest of its old cell
    return [2 * c + (0 if u == v else 1) for u, c in enumerate(colors)]


def _target_cell(colors: list[int]) -> list[int]:
    cells: dict[int, list[int]] = {}
    for v, c in enumerate(colors):
        cells.setdefault(c, []).append(v)
    best = None
    for c in sorted(cells):
        if len(cells[c]) > 1 and (best is None or len(cells[c]) > len(cells[best])):
            best = c
    return cells[best] if best is not None else []


def isomorphic(g1: Graph, g2: Graph) -> tuple[bool, list[int] | None]:
    """Isomorphism test by individualization-refinement.

    Returns ``(True, f)`` with ``f[v]`` the image in g2 of vertex v of g1, or ``(False, None)``.
    """
    if g1.vertex_count != g2.vertex_count or g1.size != g2.size:
        return False, None
    if _invariant_vector(g1) != _invariant_vector(g2):
        return False, None
    n = g1.vertex_count
    if n == 0:
        return True, []
    a1, a2 = g1.adjacency, g2.adjacency

    # fixed path in g1
    path = []
    colors, trace = _refine(a1, [0] * n)
    path.append((colors, trace))
    while True:
        cell = _target_cell(colors)
        if not cell:
            break
        colors, trace = _refine(a1, _individualize(colors, cell[0]))
        path.append((colors, trace))
    leaf1 = path[-1][0]

    def search(colors2: list[int], depth: int) -> list[int] | None:
        ref_colors = path[depth][0]
        cell1 = _target_cell(ref_colors)
        if not cell1:
            inv = {c: v for v, c in enumerate(colors2)}
            f = [inv[c] for c in leaf1]
            for v in range(n):
                if sorted(f[u] for u in a1[v]) != list(a2[f[v]]):
                    return None
            return f
        target_color = ref_colors[cell1[0]]
        cell2 = [v for v, c in enumerate(colors2) if c == target_color]
        for w in cell2:
            c2, t2 = _refine(a2, _individualize(colors2, w))
            if t2 != path[depth + 1][1]:
                continue
            f = search(c2, depth + 1)
            if f is not None:
                return f
        return None

    c2, t2 = _refine(a2, [0] * n)
    if t2 != path[0][1]:
        return False, None
    f = search(c2, 0)
    return (True, f) if f is not None else (False, None)
