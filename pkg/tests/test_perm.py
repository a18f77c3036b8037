import pytest
from hypothesis import given, strategies as st

from grpclosure.errors import DegreeMismatch, ParseError
from grpclosure.perm import Permutation


def perms(n):
    return st.permutations(range(n)).map(Permutation)


def test_parse_one_based_cycles():
    p = Permutation.parse("(1 2 3)(4 5)", 5)
    assert p(0) == 1 and p(1) == 2 and p(2) == 0
    assert p(3) == 4 and p(4) == 3
    assert str(p) == "(1 2 3)(4 5)"


def test_identity_spelling():
    e = Permutation.parse("()", 4)
    assert e.is_identity()
    assert str(e) == "()"


def test_commas_inside_cycles():
    assert Permutation.parse("(1,2)(3,4)", 4) == Permutation.parse("(1 2)(3 4)", 4)


def test_product_applies_left_first():
    a = Permutation.parse("(1 2)", 3)
    b = Permutation.parse("(2 3)", 3)
    # 1 -> 2 under a, then 2 -> 3 under b
    assert (a * b)(0) == 2
    assert a * b == Permutation.parse("(1 3 2)", 3)


@pytest.mark.parametrize("text", ["(1 2", "(1 a)", "(1 1)", "1 2)"])
def test_malformed_cycles(text):
    with pytest.raises(ParseError):
        Permutation.parse(text, 4)


def test_point_outside_degree():
    with pytest.raises((DegreeMismatch, ParseError)):
        Permutation.parse("(1 5)", 3)


def test_parse_error_reports_column():
    with pytest.raises(ParseError) as info:
        Permutation.parse("(1 2)(3 x)", 4)
    assert info.value.column > 1


@given(perms(5), perms(5), perms(5))
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(perms(6))
def test_inverse_two_sided(a):
    e = Permutation.identity(6)
    assert a * a.inverse() == e == a.inverse() * a


@given(perms(6))
def test_str_round_trip(a):
    assert Permutation.parse(str(a), 6) == a


@given(perms(6))
def test_order_is_lcm_of_cycle_lengths(a):
    k, x = 1, a
    while not x.is_identity():
        x = x * a
        k += 1
    assert a.order() == k
