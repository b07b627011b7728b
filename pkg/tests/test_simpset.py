from __future__ import annotations

from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.simpset import (
    Bisimplicial,
    SimplicialError,
    boundary_simplex,
    circle,
    compose,
    cone,
    diagonal,
    external_product,
    factor,
    find_isomorphism,
    from_simplicial_complex,
    join,
    map_violations,
    point,
    product,
    projections,
    sphere0,
    split_common,
    standard_simplex,
    surj_from_repeats,
    surj_from_word,
    degeneracy_word,
)

complexes = st.lists(st.sets(st.integers(0, 5), min_size=1, max_size=4), min_size=1, max_size=5).map(
    lambda fs: from_simplicial_complex(fs)
)


@pytest.mark.parametrize("n", range(5))
def test_standard_simplex_f_vector(n):
    x = standard_simplex(n)
    assert x.f_vector == [comb(n + 1, k + 1) for k in range(n + 1)]
    assert x.check_identities() == []


def test_boundary_and_circle():
    assert boundary_simplex(2).f_vector == [3, 3]
    assert circle(5).f_vector == [5, 5]
    assert circle(4).euler_characteristic() == 0


def test_factor_roundtrip():
    phi = (0, 0, 2, 3, 3)
    surj, mono = factor(phi)
    assert compose(mono, surj) == phi
    assert surj == (0, 0, 1, 2, 2)
    assert mono == (0, 2, 3)


def test_degeneracy_word_roundtrip():
    s = surj_from_repeats(4, {1, 3})
    assert surj_from_word(degeneracy_word(s), s[-1]) == s


def test_split_common():
    rho, rest = split_common([(0, 0, 1), (0, 0, 0)])
    assert rho == (0, 0, 1)
    assert rest == [(0, 1), (0, 0)]


def test_square_product():
    x = product(standard_simplex(1), standard_simplex(1))
    assert x.f_vector == [4, 5, 2]
    assert x.check_identities() == []


def test_prism_has_three_top_simplices():
    x = product(standard_simplex(1), standard_simplex(2))
    assert x.f_vector == [6, 12, 10, 3]
    assert x.f_vector[-1] == comb(1 + 2, 1)  # one top simplex per (1, 2)-shuffle


def test_projections_are_simplicial():
    a, b = standard_simplex(1), circle(3)
    x = product(a, b)
    pa, pb = projections(x)
    assert map_violations(x, a, pa) == []
    assert map_violations(x, b, pb) == []


def test_join_of_two_point_sets_is_a_square():
    j = join(sphere0(), sphere0())
    assert j.f_vector == [4, 4]
    square = from_simplicial_complex([(0, 2), (0, 3), (1, 2), (1, 3)])
    assert find_isomorphism(j, square) is not None


def test_cone_records_apex():
    c = cone(circle(3), apex="right")
    assert c.f_vector == [4, 6, 3]
    apex = c.meta["apex"]
    assert apex[0] == 0
    assert all(apex[1] in c.vertices(t) for t in c.cells(2))


def test_product_with_point():
    x = product(circle(3), point())
    assert x.f_vector == [3, 3]
    assert find_isomorphism(x, circle(3)) is not None


def test_external_product_diagonal_is_product():
    a, b = standard_simplex(1), standard_simplex(2)
    d = diagonal(external_product(a, b))
    assert d.f_vector == product(a, b).f_vector
    assert find_isomorphism(d, product(a, b)) is not None


def test_bad_shape_rejected():
    with pytest.raises(SimplicialError):
        from strata.simpset import FinSimpSet

        FinSimpSet([[()], [[((0,), 0)]]])


@given(complexes)
@settings(max_examples=60, deadline=None)
def test_identities_hold_on_random_complexes(x):
    assert x.check_identities() == []


@given(complexes, complexes)
@settings(max_examples=25, deadline=None)
def test_euler_characteristic_is_multiplicative(a, b):
    assert product(a, b).euler_characteristic() == a.euler_characteristic() * b.euler_characteristic()


@given(complexes, complexes)
@settings(max_examples=40, deadline=None)
def test_join_reduced_euler(a, b):
    ra, rb = a.euler_characteristic() - 1, b.euler_characteristic() - 1
    assert join(a, b).euler_characteristic() - 1 == -ra * rb


@given(complexes)
@settings(max_examples=40, deadline=None)
def test_simplex_by_vertices_inverts_vertices(x):
    for c in x.cells():
        surj, cell = x.simplex_by_vertices(x.vertices(c))
        assert cell == c and surj == tuple(range(c[0] + 1))


def test_bisimplicial_identities_checked():
    bi = external_product(standard_simplex(1), circle(3))
    assert isinstance(bi, Bisimplicial)
    assert bi.check_identities() == []
