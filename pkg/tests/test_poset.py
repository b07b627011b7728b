from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.acyccat import random_poset
from strata.fixtures import sphere_face_poset
from strata.homology import homology
from strata.poset import (
    FinPoset,
    PosetError,
    antichain,
    chain_poset,
    cw_poset_necessary_check,
    find_poset_isomorphism,
    join_poset,
    order_complex,
    poset_from_complex_faces,
    product_poset,
    with_bottom,
)
from strata.simpset import boundary_simplex


def test_chain_order_complex_is_simplex():
    assert order_complex(chain_poset(2)).f_vector == [3, 3, 1]


def test_triangle_boundary_subdivision():
    p = poset_from_complex_faces(boundary_simplex(2))
    assert len(p) == 6
    assert order_complex(p).f_vector == [6, 6]


def test_covers_are_transitive_reduction():
    p = FinPoset("abcd", [("a", "b"), ("b", "c"), ("a", "c"), ("a", "d")])
    assert sorted(p.covers) == [("a", "b"), ("a", "d"), ("b", "c")]
    assert p.lt("a", "c") and not p.leq("c", "a")


def test_cycle_rejected():
    with pytest.raises(PosetError):
        FinPoset("ab", [("a", "b"), ("b", "a")])


def test_join_poset_shape():
    j = join_poset(antichain("ab"), antichain("xy"))
    assert len(j) == 8
    assert all(j.lt(("L", a), ("J", a, x)) and j.lt(("R", x), ("J", a, x)) for a in "ab" for x in "xy")
    assert not j.leq(("L", "a"), ("R", "x"))


def test_cw_check_sphere_boundary_passes():
    assert cw_poset_necessary_check(with_bottom(sphere_face_poset(3))).ok


def test_cw_check_v_poset_passes():
    v = with_bottom(FinPoset("abc", [("a", "c"), ("b", "c")]))
    assert cw_poset_necessary_check(v).ok


def test_cw_check_three_atoms_fails():
    p = with_bottom(FinPoset("abcd", [("a", "d"), ("b", "d"), ("c", "d")]))
    rep = cw_poset_necessary_check(p)
    assert not rep.ok
    assert [v.element for v in rep.failures] == ["d"]


def test_cw_check_needs_bottom():
    with pytest.raises(PosetError):
        cw_poset_necessary_check(antichain("ab"))


@given(st.integers(0, 10_000), st.integers(1, 6))
@settings(max_examples=50, deadline=None)
def test_opposite_has_same_order_complex(seed, n):
    p = random_poset(random.Random(seed), n)
    assert order_complex(p).f_vector == order_complex(p.opposite()).f_vector


@given(
    st.lists(st.sets(st.integers(0, 3), min_size=1, max_size=3), min_size=1, max_size=3),
    st.lists(st.sets(st.integers(0, 3), min_size=1, max_size=2), min_size=1, max_size=3),
)
@settings(max_examples=30, deadline=None)
def test_join_of_face_posets_is_face_poset_of_join(fa, fb):
    from strata.simpset import from_simplicial_complex, join

    a, b = from_simplicial_complex(fa), from_simplicial_complex(fb)
    lhs = join_poset(poset_from_complex_faces(a), poset_from_complex_faces(b))
    rhs = poset_from_complex_faces(join(a, b))
    assert find_poset_isomorphism(lhs, rhs) is not None


def test_isomorphism_search():
    p = FinPoset("abc", [("a", "c"), ("b", "c")])
    q = FinPoset("xyz", [("y", "x"), ("z", "x")])
    iso = find_poset_isomorphism(p, q)
    assert iso is not None and iso["c"] == "x"
    assert find_poset_isomorphism(p, chain_poset(2)) is None


def test_product_of_chains_is_a_square():
    sq = product_poset(chain_poset(1), chain_poset(1))
    assert len(sq) == 4
    assert homology(order_complex(sq)).betti == [1, 0, 0]
