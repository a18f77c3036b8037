import random
import warnings
from math import prod

import pytest
from hypothesis import given, settings, strategies as st

from grpclosure.abelian import (
    AbelianMap,
    AbelianSubgroup,
    FgAbelianGroup,
    Free,
    Reduced,
    SingleGroup,
    SubcategoryA,
    TorsionFree,
    a_closure,
    closed_by_quantifier,
    closedness_check,
    epi_test,
    hom_group,
    is_closed,
    is_dense,
    parse_group,
    quotient_group,
    reject,
    reject_bruteforce,
    reject_elements_bruteforce,
)
from grpclosure.errors import CodomainNotInSubcategory, OrderBoundExceeded, ParseError, QuantifierCheckInfeasible


def G(*f):
    return FgAbelianGroup(tuple(f))


def S(A, *gens):
    return AbelianSubgroup(A, list(gens))


Z = G(0)


# -- groups and subgroups -----------------------------------------------------------

def test_invariants():
    with pytest.raises(ValueError):
        G(1)
    with pytest.raises(ValueError):
        G(4, 6)
    assert G().is_trivial and not G(2).is_trivial
    assert G(0, 4).free_rank == 1 and not G(0, 4).is_finite
    assert FgAbelianGroup.from_cyclic([2, 3]) == G(6)
    assert FgAbelianGroup.from_cyclic([1, 4, 0, 6]).invariant_factors == (2, 12, 0)


def test_generators_reduced():
    A = G(4)
    assert S(A, (5,)).generators == ((1,),)
    assert S(A, (4,)).generators == ()


def test_membership_and_equality():
    A = G(0, 4)
    H = S(A, (2, 1))
    assert (4, 2) in H and (2, 3) not in H and (0, 0) in H
    assert S(A, (2, 1), (0, 2)) == S(A, (2, 1), (4, 0), (0, 2))
    assert S(A, (1, 0)) != S(A, (2, 0))


def test_parse_group():
    assert parse_group("[0, 4]") == G(0, 4)
    with pytest.raises(ParseError):
        parse_group("[0, 4")
    with pytest.raises(ParseError):
        parse_group("[6, 4]")


# -- quotients ----------------------------------------------------------------------

def test_quotient_examples():
    assert quotient_group(Z, S(Z, (2,)))[0] == G(2)
    A = G(2, 6)
    assert quotient_group(A, A.zero_subgroup())[0] == A
    assert quotient_group(G(0, 4), S(G(0, 4), (2, 0)))[0] == G(2, 4)


def test_projection_is_a_homomorphism_onto():
    A = G(0, 4, 12)
    H = S(A, (3, 2, 0), (0, 0, 4))
    Q, pi = quotient_group(A, H)
    for g in H.generators:
        assert not any(pi(g))
    for y in [(1,) * Q.rank, (0,) * Q.rank]:
        assert pi(pi.lift(y)) == Q.reduce(y)


# -- hom groups ---------------------------------------------------------------------

def test_hom_examples():
    assert hom_group(G(6), G(4)).invariant_factors == (2,)
    assert hom_group(Z, Z).invariant_factors == (0,)
    assert hom_group(G(2), Z).is_zero
    assert hom_group(Z, G(5)).invariant_factors == (5,)


factor_lists = st.lists(st.sampled_from([0, 2, 3, 4, 6, 8, 9, 12]), max_size=3)


@given(factor_lists, factor_lists, factor_lists)
def test_hom_additive_in_first_argument(q1, q2, a):
    Q1, Q2, A = (FgAbelianGroup.from_cyclic(x) for x in (q1, q2, a))
    both = hom_group(FgAbelianGroup.from_cyclic(q1 + q2), A)
    split = FgAbelianGroup.from_cyclic(list(hom_group(Q1, A).invariant_factors)
                                       + list(hom_group(Q2, A).invariant_factors))
    assert both.invariant_factors == split.invariant_factors


def test_hom_order_matches_count_of_maps():
    # |Hom(Q, A)| counted by trying every image of every unit vector
    for q, a in [((2, 4), (4,)), ((6,), (2, 6)), ((3,), (2,)), ((2, 2), (2, 2))]:
        Q, A = G(*q), G(*a)
        count = 1
        for d in Q.invariant_factors:
            count *= sum(1 for x in A.elements() if not any(A.reduce([d * v for v in x])))
        assert prod(hom_group(Q, A).invariant_factors) == count


# -- density, closedness, closure -------------------------------------------------------

def test_dense_examples():
    assert is_dense(Z, S(Z, (2,)), TorsionFree)
    A = G(0, 6)
    assert is_dense(A, A.whole(), SingleGroup([2]))
    assert not is_dense(Z, S(Z, (2,)), SingleGroup([2]))


def test_closed_examples():
    A = G(0, 2)
    assert not is_closed(A, S(A, (1, 0)), TorsionFree)
    assert is_closed(A, A.whole(), Reduced)
    assert not is_closed(Z, S(Z, (2,)), TorsionFree)


def test_closure_examples():
    A = G(0, 4)
    assert a_closure(A, S(A, (2, 0)), TorsionFree).is_whole()
    H = S(A, (3, 2))
    assert a_closure(A, H, Reduced) == H
    assert a_closure(Z, Z.zero_subgroup(), TorsionFree).is_zero()


def test_free_matches_torsionfree():
    A = G(0, 0, 6)
    H = S(A, (2, 0, 1))
    assert a_closure(A, H, Free) == a_closure(A, H, TorsionFree)


def test_single_group_infinite_quotient():
    # G/H = Z + Z/2 into Z/2: reject is 2Z + 0
    A = G(0, 0)
    H = S(A, (0, 2))
    c = a_closure(A, H, SingleGroup([2]))
    assert c == S(A, (2, 0), (0, 2))


def test_quantifier_warning_on_infinite_quotient():
    with pytest.warns(QuantifierCheckInfeasible):
        assert closed_by_quantifier(Z, Z.zero_subgroup(), SingleGroup([2])) is None


def test_quantifier_literal_false_positive():
    # every nonzero subgroup of Z/4 maps onto Z/2, yet 2Z/4 lies in all kernels
    A = G(4)
    chk = closedness_check(A, A.zero_subgroup(), SingleGroup([2]))
    assert chk.quantifier is True and chk.closed is False and not chk.agrees


def test_quantifier_agrees_on_squarefree_quotient():
    A = G(2, 6)
    chk = closedness_check(A, A.zero_subgroup(), SingleGroup([6]))
    assert chk.closed and chk.quantifier and chk.agrees


def test_subcategory_parse():
    assert SubcategoryA.parse("torsion-free") == TorsionFree
    assert SubcategoryA.parse("group:[2,4]") == SingleGroup([2, 4])
    with pytest.raises(ParseError):
        SubcategoryA.parse("divisible")


def rand_instance(rng):
    A = FgAbelianGroup.from_cyclic([rng.choice([0, 2, 3, 4, 6]) for _ in range(rng.randint(0, 3))])
    H = AbelianSubgroup(A, [tuple(rng.randint(-6, 6) for _ in range(A.rank)) for _ in range(rng.randint(0, 3))])
    return A, H


CATS = [TorsionFree, Reduced, Free, SingleGroup([2]), SingleGroup([0]), SingleGroup([6]), SingleGroup([0, 4])]


def test_closure_axioms_random():
    rng = random.Random(0)
    for _ in range(300):
        A, H = rand_instance(rng)
        K = AbelianSubgroup(A, list(H.generators) + [tuple(rng.randint(-6, 6) for _ in range(A.rank))])
        for cat in CATS:
            c = a_closure(A, H, cat)
            assert H <= c
            assert a_closure(A, c, cat) == c
            assert c <= a_closure(A, K, cat)


def test_density_duality_random():
    rng = random.Random(1)
    for _ in range(300):
        A, H = rand_instance(rng)
        for cat in CATS:
            d = is_dense(A, H, cat)
            assert d == a_closure(A, H, cat).is_whole()
            if d and not H.is_whole():
                assert not is_closed(A, H, cat)
            if is_closed(A, H, cat):
                assert a_closure(A, H, cat) == H


# -- epimorphisms -------------------------------------------------------------------------

def test_epi_examples():
    v = epi_test(AbelianMap(Z, Z, ((3,),)), TorsionFree)
    assert v.is_epi and not v.is_surjective
    v = epi_test(AbelianMap(Z, Z, ((1,),)), TorsionFree)
    assert v.is_epi and v.is_surjective
    v = epi_test(AbelianMap(Z, Z, ((0,),)), TorsionFree)
    assert not v.is_epi and not v.is_surjective


def test_epi_codomain_check():
    with pytest.raises(CodomainNotInSubcategory):
        epi_test(AbelianMap(Z, G(4), ((1,),)), TorsionFree)


def test_map_validation():
    with pytest.raises(ValueError):
        AbelianMap(G(2), G(3), ((1,),))


def test_epi_consistency_random():
    rng = random.Random(2)
    for _ in range(200):
        dom = FgAbelianGroup.from_cyclic([rng.choice([0, 2, 4]) for _ in range(rng.randint(1, 2))])
        cod = FgAbelianGroup.from_cyclic([0] * rng.randint(1, 2))
        M = tuple(tuple(rng.randint(-3, 3) * (d == 0) for _ in range(cod.rank)) for d in dom.invariant_factors)
        f = AbelianMap(dom, cod, M)
        for cat in (TorsionFree, Reduced, Free):
            v = epi_test(f, cat)
            assert v.is_epi == is_dense(cod, f.image(), cat)
            if v.is_surjective:
                assert v.is_epi


# -- brute-force reject --------------------------------------------------------------------

def test_bruteforce_examples():
    assert reject_bruteforce(G(4), G(2)) == S(G(4), (2,))
    assert reject_bruteforce(G(3), G(2)).is_whole()
    assert reject_bruteforce(G(2, 2), G(2)).is_zero()


def test_bruteforce_bounds():
    with pytest.raises(OrderBoundExceeded):
        reject_bruteforce(G(1024), G(2))
    with pytest.raises(ValueError):
        reject_bruteforce(Z, G(2))


@pytest.mark.parametrize("q,a", [((2, 4), (2, 4)), ((6, 12), (4,)), ((2, 2, 2), (2, 2)), ((3, 9), (3, 9))])
def test_exhaustive_and_summand_enumerations_agree(q, a):
    Q, A = G(*q), G(*a)
    assert reject_elements_bruteforce(Q, A, max_homs=10 ** 6) == reject_elements_bruteforce(Q, A, max_homs=0)


finite_lists = st.lists(st.sampled_from([2, 3, 4, 5, 6, 8, 9, 12]), max_size=3).filter(lambda x: prod(x) <= 200)


@settings(max_examples=200)
@given(finite_lists, finite_lists)
def test_bruteforce_matches_formula(q, a):
    Q, A = FgAbelianGroup.from_cyclic(q), FgAbelianGroup.from_cyclic(a)
    assert reject_elements_bruteforce(Q, A) == reject(Q, SingleGroup(A)).element_set()
