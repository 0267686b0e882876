import pytest
from hypothesis import given, strategies as st

from eprim import CycleSyntaxError, Permutation, inverse, parse_cycles, product


def perms(degree: int):
    return st.permutations(range(degree)).map(Permutation)


@st.composite
def perm_pairs(draw):
    n = draw(st.integers(1, 9))
    return draw(perms(n)), draw(perms(n))


def test_three_cycle_images():
    p = parse_cycles("(1,2,3)", 5)
    # 1-based description: 1->2, 2->3, 3->1, 4->4, 5->5
    assert [p(x) + 1 for x in range(5)] == [2, 3, 1, 4, 5]


def test_empty_cycle_is_identity():
    p = parse_cycles("()", 4)
    assert p.degree == 4 and p.is_identity()


@pytest.mark.parametrize("text, degree", [
    ("(1,2", 4),
    ("1,2)", 4),
    ("((1,2))", 4),
    ("(1,1)", 4),
    ("(1,5)", 4),
    ("(0,2)", 4),
    ("(1,,2)", 4),
    ("(1,x)", 4),
])
def test_malformed_cycles_raise(text, degree):
    with pytest.raises(CycleSyntaxError) as info:
        parse_cycles(text, degree)
    assert 0 <= info.value.position <= len(text)


def test_unterminated_cycle_position():
    with pytest.raises(CycleSyntaxError, match="unterminated"):
        parse_cycles("(1,2", 4)


def test_fixed_points_are_kept():
    p = parse_cycles("(1,2)", 266)
    assert p.degree == 266 and p(265) == 265


def test_product_apply_left_first():
    a, b = parse_cycles("(1,2)", 3), parse_cycles("(2,3)", 3)
    assert product(a, b) == parse_cycles("(1,3,2)", 3)
    assert a * b == product(a, b)


def test_inverse_of_three_cycle():
    assert inverse(parse_cycles("(1,2,3)", 3)) == parse_cycles("(1,3,2)", 3)


def test_juxtaposed_cycles_multiply():
    assert parse_cycles("(1,2)(2,3)", 3) == parse_cycles("(1,3,2)", 3)


def test_degree_mismatch_rejected():
    with pytest.raises(ValueError):
        parse_cycles("(1,2)", 3) * parse_cycles("(1,2)", 4)


@given(perm_pairs())
def test_inverse_reverses_products(pair):
    a, b = pair
    assert inverse(a * b) == inverse(b) * inverse(a)


@given(perm_pairs())
def test_composition_convention(pair):
    a, b = pair
    ab = a * b
    assert all(ab(x) == b(a(x)) for x in range(a.degree))


@given(st.integers(1, 12).flatmap(perms))
def test_inverse_gives_identity(a):
    assert (a * inverse(a)).is_identity()
    assert (inverse(a) * a).is_identity()


@given(st.integers(1, 12).flatmap(perms))
def test_round_trip_is_canonical(a):
    text = str(a)
    b = parse_cycles(text, a.degree)
    assert b == a
    assert str(b) == text


@given(st.integers(1, 12).flatmap(perms))
def test_order_and_parity(a):
    assert (a ** a.order()).is_identity()
    transpositions = sum(len(c) - 1 for c in a.cycles())
    assert a.is_even() == (transpositions % 2 == 0)
