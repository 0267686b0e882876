import pytest
from hypothesis import given, settings, strategies as st

from eprim import (
    Permutation,
    PermGroup,
    coset_action,
    intersection,
    is_biprimitive,
    is_maximal,
    is_normalized,
    is_primitive,
    minimal_block_system,
    normal_closure,
    stabilizer,
)
from eprim.group import IndexCapExceeded, primitivity_witness

from conftest import alt, catalog_group, cyclic, group, lattice, perm, sym
from oracles import brute_biprimitive, brute_primitive, closure


def gens_strategy(degree: int, max_gens: int = 3):
    return st.lists(st.permutations(range(degree)).map(Permutation), min_size=1, max_size=max_gens)


D8 = ("(1,2,3,4)", "(1,3)")


def test_orders_of_small_groups():
    assert group(6, "(1,2,3,4,5,6)", "(1,2)").order == 720
    assert group(5, "(1,2,3,4,5)").order == 5
    assert group(1).order == 1


def test_j1_order():
    assert catalog_group("j1").order == 175560


@pytest.mark.parametrize("text, n, member", [
    ("(1,2)", 6, True),
    ("(1,2,3)", 6, True),
])
def test_membership_in_s6(text, n, member):
    assert (perm(text, n) in sym(6)) is member


def test_membership_in_a6():
    A6 = alt(6)
    assert A6.order == 360
    assert perm("(1,2)", 6) not in A6
    assert perm("(1,2)(3,4)", 6) in A6


@pytest.mark.parametrize("G", [sym(4), alt(5), cyclic(7), group(3)])
def test_identity_in_every_group(G):
    assert G.identity in G


def test_point_stabilizers():
    assert stabilizer(sym(6), [0]).order == 120
    assert stabilizer(alt(6), [0, 1]).order == 12


def test_stabilizer_fixes_points():
    S = stabilizer(alt(6), [2, 4])
    assert all(g(2) == 2 and g(4) == 4 for g in S.strong_generators)


def test_blocks_of_c4():
    bs = minimal_block_system(cyclic(4), 0, 2)
    assert sorted(map(sorted, bs.blocks())) == [[0, 2], [1, 3]]


@pytest.mark.parametrize("a, b", [(0, 1), (0, 2), (1, 3), (2, 3)])
def test_s4_blocks_are_trivial(a, b):
    bs = minimal_block_system(sym(4), a, b)
    assert bs.block_count == 1


def test_blocks_of_d8():
    bs = minimal_block_system(group(4, *D8), 0, 2)
    assert sorted(map(sorted, bs.blocks())) == [[0, 2], [1, 3]]
    assert str(bs) == "{1,3} {2,4}"


def test_blocks_require_transitivity():
    with pytest.raises(ValueError):
        minimal_block_system(group(4, "(1,2)"), 0, 1)


def test_a6_is_primitive():
    assert is_primitive(alt(6))


def test_wreath_product_witness():
    W = group(4, "(1,2)", "(1,3)(2,4)")
    ok, witness = is_primitive(W, witness=True)
    assert not ok
    assert sorted(map(sorted, witness.blocks())) == [[0, 1], [2, 3]]
    assert witness.is_invariant(W.generators)


def test_j1_on_266_points_is_primitive():
    assert is_primitive(catalog_group("j1"))


def test_intransitive_is_not_primitive():
    assert not is_primitive(group(4, "(1,2)"))
    assert primitivity_witness(group(4, "(1,2)")) is not None


def test_c6_not_biprimitive():
    assert brute_biprimitive([tuple(perm("(1,2,3,4,5,6)", 6).images)], 6) is False
    assert not is_biprimitive(cyclic(6))


def test_primitive_group_not_biprimitive():
    assert not is_biprimitive(alt(6))


def test_aut_a6_on_cage_vertices_is_biprimitive():
    L = lattice("a6_row10")
    image = coset_action(L.G, L.H).image
    assert image.degree == 30
    assert is_biprimitive(image)


@pytest.mark.parametrize("gens, n, expected", [
    (("(1,2)(3,4)", "(1,3)(2,4)"), 4, True),    # V4 regular: only 2-block systems
    (("(1,2,3,4)",), 4, True),
    (("(1,2,3,4,5,6,7,8)",), 8, False),
    (("(1,2)", "(3,4)", "(1,3)(2,4)"), 4, True),
])
def test_biprimitive_against_brute_force(gens, n, expected):
    G = group(n, *gens)
    brute = brute_biprimitive([tuple(perm(t, n).images) for t in gens], n)
    assert brute is expected
    assert is_biprimitive(G) is expected


def test_a4_normal_in_s4():
    A4 = group(4, "(1,2,3)", "(2,3,4)")
    assert is_normalized(A4, perm("(1,2)", 4))


def test_transposition_not_normal_in_s4():
    assert not is_normalized(group(4, "(1,2)"), perm("(2,3)", 4))


def test_normal_closure_of_transposition():
    assert normal_closure(sym(4), group(4, "(1,2)")).order == 24
    assert normal_closure(sym(4), group(4, "(1,2)(3,4)")).order == 4


def test_row10_derived_subgroup_not_normalized():
    L = lattice("a6_row10")
    gens = L.H.generators
    comms = [a.commutator(b) for a in gens for b in gens]
    D = normal_closure(L.H, PermGroup([c for c in comms if not c.is_identity()], L.H.degree))
    assert 1 < D.order < L.H.order
    outside = [x for x in L.E.elements() if x not in L.A]
    assert len(outside) == L.E.order // 2
    assert not any(is_normalized(D, g) for g in outside)


def test_natural_a6_action_on_a5_cosets():
    A6 = alt(6)
    ca = coset_action(A6, stabilizer(A6, [0]))
    assert ca.degree == 6 and ca.faithful


def test_s4_on_d8_cosets_has_kernel():
    ca = coset_action(sym(4), group(4, *D8))
    assert ca.degree == 3
    assert not ca.faithful
    # kernel order from brute force over all 24 elements
    kernel = [g for g in sym(4).elements() if ca.image_of(g).is_identity()]
    assert len(kernel) == 4 == 24 // ca.image.order


def test_aut_a6_on_s4xs2_cosets():
    L = lattice("a6_row10")
    ca = coset_action(L.G, L.H)
    assert ca.degree == 30 and ca.faithful and ca.image.order == 1440


def test_coset_representatives_land_in_their_cosets():
    G, H = sym(5), group(5, "(1,2)", "(3,4,5)", "(3,4)")
    ca = coset_action(G, H)
    assert ca.degree == 10
    for i, r in enumerate(ca.transversal()):
        assert ca.coset_of(r) == i


def test_coset_action_cap():
    with pytest.raises(IndexCapExceeded):
        coset_action(sym(7), group(7), cap=100)


def test_maximality_examples():
    A6 = alt(6)
    assert is_maximal(A6, stabilizer(A6, [0]))
    assert not is_maximal(sym(4), group(4, "(1,2)"))
    assert is_maximal(sym(4), group(4, *D8))


def test_intersection_of_s4_subgroups():
    D = group(4, *D8)
    A4 = group(4, "(1,2,3)", "(2,3,4)")
    assert intersection(D, A4).order == 4


@settings(max_examples=40, deadline=None)
@given(gens_strategy(6))
def test_order_matches_enumeration(gens):
    G = PermGroup(gens, 6)
    assert G.order == len(closure([g.images for g in gens], 6))


@settings(max_examples=40, deadline=None)
@given(gens_strategy(7), st.integers(0, 6))
def test_orbit_stabilizer(gens, point):
    G = PermGroup(gens, 7)
    assert G.order == len(G.orbit(point)) * stabilizer(G, [point]).order


@settings(max_examples=30, deadline=None)
@given(gens_strategy(8))
def test_primitivity_matches_brute_force(gens):
    G = PermGroup(gens, 8)
    lists = [g.images for g in gens]
    assert is_primitive(G) == brute_primitive(lists, 8)
    assert is_biprimitive(G) == brute_biprimitive(lists, 8)


@settings(max_examples=20, deadline=None)
@given(gens_strategy(6, 2))
def test_coset_action_of_stabilizer(gens):
    G = PermGroup(gens, 6)
    H = stabilizer(G, [0])
    ca = coset_action(G, H)
    assert ca.degree == len(G.orbit(0))
    assert ca.image.is_transitive()
    if ca.faithful:
        assert stabilizer(ca.image, [0]).order == H.order
