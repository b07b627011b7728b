from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.acyccat import chain_category, iso_check, random_acyclic_category
from strata.fixtures import figure_one, hexagon_flow_category, named_categories, point_category, tetra_boundary
from strata.simpset import boundary_simplex
from strata.stellar import (
    cylindrical_structure,
    extract_face_category,
    lower_star,
    parameter_components,
    roundtrip,
    salvetti_check,
    simplicial_cylindrical_structure,
    stable_stratification,
    unstable_stratification,
    verify_cone,
    verify_cylindrical,
    verify_link_levels,
    verify_partition,
    verify_stratum_equals_star,
)


def stratum_sizes(c):
    s = unstable_stratification(c)
    return {x: len(s.stratum(x)) for x in s.image}


def test_unstable_strata_of_figure_one():
    assert stratum_sizes(figure_one()) == {"x": 1, "y": 2, "z": 7}


def test_unstable_strata_of_two_simplex():
    assert stratum_sizes(chain_category(2)) == {0: 1, 1: 2, 2: 4}


def test_stable_strata_mirror_unstable():
    s = stable_stratification(chain_category(2))
    assert sorted(len(s.stratum(x)) for x in s.image) == [1, 2, 4]


def test_lower_star_of_z():
    st_ = lower_star(figure_one(), "z")
    assert st_.dome.f_vector == [5, 6, 2]
    assert st_.boundary.f_vector == [4, 2]


@pytest.mark.parametrize("obj", ["x", "y", "z"])
def test_stellar_checks_figure_one(obj):
    c = figure_one()
    st_ = lower_star(c, obj)
    for rep in (verify_cone(st_), verify_stratum_equals_star(c, obj, star=st_), verify_link_levels(c, obj, st_)):
        assert rep.ok, rep.failures()


def test_partition():
    assert verify_partition(figure_one()).ok


def test_cylindrical_structure_and_parameters():
    c = figure_one()
    cyl = cylindrical_structure(c)
    assert verify_cylindrical(cyl).ok
    assert len(parameter_components(cyl, "y", "z")) == 2
    fc = extract_face_category(cyl)
    assert iso_check(fc, c) is not None


def test_roundtrip_figure_one_is_identity_on_objects():
    rep = roundtrip(figure_one())
    assert rep.ok
    assert rep.isomorphism["objects"] == {"x": "x", "y": "y", "z": "z"}


def test_roundtrip_hexagon_enriched():
    assert roundtrip(hexagon_flow_category()).ok


@pytest.mark.parametrize("name", sorted(named_categories()))
def test_roundtrip_named(name):
    assert roundtrip(named_categories()[name]).ok


def test_point():
    rep = roundtrip(point_category())
    assert rep.ok


def test_simplicial_face_category():
    fc, rep = simplicial_cylindrical_structure(boundary_simplex(2))
    assert rep.ok
    assert len(fc.objects) == 6 and len(fc.morphisms) == 6
    assert salvetti_check(tetra_boundary()).ok


@given(st.integers(0, 100_000))
@settings(max_examples=60, deadline=None)
def test_roundtrip_random(seed):
    c = random_acyclic_category(random.Random(seed), max_objects=4, max_hom=2)
    rep = roundtrip(c)
    assert rep.ok, (rep.witness, rep.stellar.failures())
