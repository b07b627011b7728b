from __future__ import annotations

import random
from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.acyccat import (
    AcycCat,
    CategoryError,
    brute_force_f_vector,
    chain_category,
    classifying_space,
    free_category,
    from_poset,
    ident,
    iso_check,
    mismatch_invariant,
    random_acyclic_category,
)
from strata.fixtures import (
    figure_one,
    hexagon_flow_category,
    nontrivial_monoid,
    suspension_category,
    two_point_opposite,
)
from strata.homology import homology
from strata.poset import FinPoset
from strata.simpset import find_isomorphism, standard_simplex


def test_figure_one_nerve():
    c = figure_one()
    assert c.validate().ok
    b = c.nondegenerate_nerve()
    assert b.f_vector == [3, 5, 2]
    assert homology(b).betti == [1, 1, 0]


def test_composition_and_identities():
    c = figure_one()
    assert c.compose("u1", "v") == "u1v"
    assert c.compose(ident("y"), "v") == "v"
    with pytest.raises(CategoryError):
        c.compose("v", "u1")


@pytest.mark.parametrize("n", range(5))
def test_nerve_of_chain_is_simplex(n):
    b = chain_category(n).nondegenerate_nerve()
    assert b.f_vector == [comb(n + 1, k + 1) for k in range(n + 1)]
    assert find_isomorphism(b, standard_simplex(n)) is not None


def test_axiom_failures_are_witnessed():
    rep = two_point_opposite().validate()
    assert not rep.verdict("no_opposite_homs").ok
    rep = nontrivial_monoid().validate()
    assert not rep.verdict("identity_only_endos").ok
    assert rep.verdict("identity_only_endos").witness is not None


def test_missing_composite_is_reported():
    c = AcycCat("xyz", {"f": ("x", "y"), "g": ("y", "z"), "h": ("x", "z")}, {})
    assert not c.validate().verdict("composition_total").ok


def test_commas():
    c = figure_one()
    below = c.comma_below("z")
    assert len(below.objects) == 5
    assert len(below.morphisms) == 6
    above = c.comma_above("y")
    assert len(above.objects) == 3
    assert len(above.morphisms) == 2
    assert c.below_link("z").nondegenerate_nerve().f_vector == [4, 2]


def test_suspension_example():
    s = suspension_category(3)
    assert s.validate().ok
    b = s.classifying_space()
    assert b.f_vector == [2, 6, 6]
    assert homology(b).betti == [1, 0, 1]
    assert b.euler_characteristic() == 2


def test_hexagon_flow_double_nerve():
    c = hexagon_flow_category()
    assert c.validate().ok
    b = classifying_space(c, tier="enriched")
    assert b.f_vector == [2, 12, 12]
    assert homology(b).betti == [1, 0, 1]


def test_enriched_and_discrete_agree_without_order():
    c = figure_one()
    assert find_isomorphism(c.enriched().classifying_space(), c.nondegenerate_nerve()) is not None


def test_iso_check_detects_opposite():
    c = figure_one()
    assert iso_check(c, c) is not None
    assert iso_check(c, c.opposite()) is None
    assert mismatch_invariant(c, c.opposite())["invariant"] != "none_cheap"


def test_iso_check_respects_hom_order():
    p = FinPoset("ab", [("a", "b")])
    c1 = AcycCat("xy", {"a": ("x", "y"), "b": ("x", "y")}, {}, hom_order=[("a", "b")])
    c2 = AcycCat("xy", {"a": ("x", "y"), "b": ("x", "y")}, {}, hom_order=[])
    assert len(p) == 2
    assert iso_check(c1, c1) is not None
    assert iso_check(c1, c2) is None


def test_free_category_paths():
    c = free_category("abc", {"f": ("a", "b"), "g": ("b", "c")})
    assert c.validate().ok
    assert len(c.nonid_hom("a", "c")) == 1


def test_from_poset_matches_order_complex():
    p = FinPoset("abcd", [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    from strata.poset import order_complex

    assert from_poset(p).nondegenerate_nerve().f_vector == order_complex(p).f_vector


@given(st.integers(0, 100_000))
@settings(max_examples=80, deadline=None)
def test_random_categories_valid_and_counted(seed):
    c = random_acyclic_category(random.Random(seed), max_objects=5, max_hom=3)
    assert c.validate().ok
    assert all(len(c.nonid_hom(x, y)) <= 3 for x in c.objects for y in c.objects)
    assert c.nondegenerate_nerve().f_vector == brute_force_f_vector(c)
