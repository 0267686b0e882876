import itertools
import math
import random

import pytest

from eprim.cosetgraph import Graph, build_from_lattice, build_graph
from eprim.graphprops import (
    basic_invariants,
    canonical_arc,
    count_four_cycles,
    count_triangles,
    edge_action,
    girth,
    is_bipartite,
    is_edge_primitive,
    is_vertex_biprimitive,
    isomorphic,
    local_action,
    s_arc_transitivity,
)
from eprim.group import stabilizer
from eprim.lattice import find_lattices

from conftest import A6_ROWS, alt, group, lattice_graph, perm, sym

CORPUS = A6_ROWS + ["gamma1", "hoffman_singleton", "m12_2_weiss"]


def complete(n: int) -> Graph:
    return Graph([[u for u in range(n) if u != v] for v in range(n)])


def cycle(n: int) -> Graph:
    return Graph([[(v - 1) % n, (v + 1) % n] for v in range(n)])


def petersen() -> Graph:
    H = group(5, "(1,2)", "(3,4,5)", "(3,4)")
    return build_graph(sym(5), H, perm("(1,3)(2,4)", 5))


def k5_with_a5() -> Graph:
    return build_from_lattice(find_lattices(alt(5))[0])


def test_cage_invariants():
    inv = basic_invariants(lattice_graph("a6_row10"))
    assert (inv.order, inv.size, inv.valency, inv.bipartite, inv.girth) == (30, 45, 3, True, 8)


def test_gamma1_invariants():
    inv = basic_invariants(lattice_graph("gamma1"))
    assert (inv.order, inv.valency, inv.bipartite, inv.girth) == (30, 7, True, 4)


def test_k4_invariants():
    inv = basic_invariants(complete(4))
    assert inv.girth == 3 and inv.complete and not inv.bipartite


@pytest.mark.parametrize("n", [3, 4, 7, 12])
def test_cycle_girth(n):
    assert girth(cycle(n)) == n
    assert is_bipartite(cycle(n)) == (n % 2 == 0)


def test_forest_girth_is_infinite():
    g = Graph([[1], [0, 2], [1]])
    assert math.isinf(girth(g))
    assert basic_invariants(g).to_dict()["girth"] is None


def test_complete_bipartite_flag():
    g = Graph([[3, 4, 5]] * 3 + [[0, 1, 2]] * 3)
    inv = basic_invariants(g)
    assert inv.complete_bipartite and not inv.complete and inv.girth == 4


@pytest.mark.parametrize("g, triangles", [(complete(4), 4), (complete(5), 10), (cycle(6), 0)])
def test_triangle_counts(g, triangles):
    assert count_triangles(g) == triangles


def test_four_cycles_in_k4():
    assert count_four_cycles(complete(4)) == 3


def test_k5_with_a5_is_edge_primitive():
    g = k5_with_a5()
    assert g.vertex_count == 5
    assert edge_action(g).degree == 10
    assert is_edge_primitive(g)


def test_petersen_with_s5_not_edge_primitive():
    g = petersen()
    ea = edge_action(g)
    assert ea.group.order == 120
    assert stabilizer(ea.group, [0]).order == 8
    assert not is_edge_primitive(g)


def test_cage_is_edge_primitive():
    assert is_edge_primitive(lattice_graph("a6_row10"))


@pytest.mark.parametrize("name", CORPUS)
def test_edge_action_degree_matches_size(name):
    g = lattice_graph(name)
    ea = edge_action(g)
    assert ea.degree == g.size
    assert ea.group.is_transitive()


@pytest.mark.parametrize("name, max_s", [
    ("a6_row10", 5),
    ("gamma1", 2),
    ("j1", 2),
])
def test_s_arc_examples(name, max_s):
    assert s_arc_transitivity(lattice_graph(name)).max_s == max_s


def test_j1_two_arc_stabilizer():
    g = lattice_graph("j1")
    res = s_arc_transitivity(g)
    assert res.stabilizer_order(2) == 3
    # independently: pointwise stabilizer of the canonical 2-arc
    arc = canonical_arc(g, 2)
    assert stabilizer(g.action_group(), arc).order == 3


@pytest.mark.parametrize("name", CORPUS)
def test_s_arc_counting_identity(name):
    g = lattice_graph(name)
    res = s_arc_transitivity(g)
    n, d = g.vertex_count, g.valency
    for s in range(1, res.max_s + 1):
        arcs = n * d * (d - 1) ** (s - 1)
        assert res.group_order == arcs * res.stabilizer_order(s)


@pytest.mark.parametrize("name", CORPUS)
def test_local_two_transitivity_matches_arcs(name):
    g = lattice_graph(name)
    assert local_action(g).two_transitive == (s_arc_transitivity(g).max_s >= 2)


def test_hoffman_singleton_local_action():
    la = local_action(lattice_graph("hoffman_singleton"))
    assert la.induced_order == 5040 and la.faithful and la.two_transitive
    assert len(la.neighbor_order) == 7


def test_cage_local_action():
    la = local_action(lattice_graph("a6_row10"))
    assert la.stabilizer_order == 48
    assert la.induced_order == 6 and la.two_transitive
    # kernel is |G_v| / |induced image|
    assert la.kernel_order == 48 // 6


def test_gamma1_local_action():
    la = local_action(lattice_graph("gamma1"))
    assert la.two_transitive and len(la.neighbor_order) == 7


def test_cycle_arc_transitivity_is_unbounded():
    g = build_graph(group(6, "(1,2,3,4,5,6)", "(2,6)(3,5)"), group(6, "(2,6)(3,5)"), perm("(1,2)(3,6)(4,5)", 6))
    assert g.valency == 2
    assert s_arc_transitivity(g).max_s is None


def test_cage_is_biprimitive():
    assert is_vertex_biprimitive(lattice_graph("a6_row10"))


def test_k10_not_biprimitive():
    assert not is_vertex_biprimitive(lattice_graph("a6_row05"))


@pytest.mark.parametrize("a, b", list(itertools.combinations(["a6_row04", "a6_row07", "a6_row10"], 2)))
def test_cage_rows_isomorphic(a, b):
    g, h = lattice_graph(a), lattice_graph(b)
    ok, f = isomorphic(g, h)
    assert ok
    assert all(h.has_edge(f[u], f[v]) for u, v in g.edges())


@pytest.mark.parametrize("seed", range(5))
def test_relabelled_complete_graph(seed):
    order = list(range(6))
    random.Random(seed).shuffle(order)
    ok, f = isomorphic(complete(6), complete(6).relabel(order))
    assert ok and sorted(f) == list(range(6))


def test_cage_not_gamma1():
    assert isomorphic(lattice_graph("a6_row10"), lattice_graph("gamma1")) == (False, None)


@pytest.mark.parametrize("seed", range(4))
def test_relabelled_cage(seed):
    g = lattice_graph("a6_row10")
    order = list(range(30))
    random.Random(seed).shuffle(order)
    h = g.relabel(order)
    ok, f = isomorphic(h, g)
    assert ok
    assert all(g.has_edge(f[u], f[v]) for u, v in h.edges())


def test_cube_not_wagner():
    # same order and valency; only the cube is bipartite
    cube = Graph([[1, 3, 4], [0, 2, 5], [1, 3, 6], [0, 2, 7], [0, 5, 7], [1, 4, 6], [2, 5, 7], [3, 4, 6]])
    wagner = Graph([[(v + 1) % 8, (v - 1) % 8, (v + 4) % 8] for v in range(8)])
    assert isomorphic(cube, wagner)[0] is False


def test_isomorphism_is_equivalence_on_corpus():
    names = A6_ROWS + ["gamma1"]
    graphs = [lattice_graph(n) for n in names]
    rel = {(i, j): isomorphic(graphs[i], graphs[j])[0] for i in range(len(names)) for j in range(len(names))}
    for i in range(len(names)):
        assert rel[i, i]
    for i, j in rel:
        assert rel[i, j] == rel[j, i]
    for i, j, k in itertools.product(range(len(names)), repeat=3):
        if rel[i, j] and rel[j, k]:
            assert rel[i, k]


def _grid_graph(diffs) -> Graph:
    cells = [(i, j) for i in range(4) for j in range(4)]
    adj = [[4 * ((i + a) % 4) + (j + b) % 4 for a, b in diffs] for i, j in cells]
    return Graph(adj)


def test_shrikhande_not_rook():
    # both strongly regular (16, 6, 2, 2): every cheap invariant agrees
    rook = _grid_graph([(a, 0) for a in (1, 2, 3)] + [(0, b) for b in (1, 2, 3)])
    shrikhande = _grid_graph([(1, 0), (3, 0), (0, 1), (0, 3), (1, 1), (3, 3)])
    assert count_triangles(rook) == count_triangles(shrikhande)
    assert count_four_cycles(rook) == count_four_cycles(shrikhande)
    assert isomorphic(rook, shrikhande)[0] is False
    assert isomorphic(shrikhande, shrikhande.relabel(list(reversed(range(16)))))[0]
