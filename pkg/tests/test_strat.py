from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.fixtures import antichain_edge_labels, hourglass, v_edge_labels, vertex_plus_open_triangle
from strata.homology import homology
from strata.poset import face_poset as poset_face_poset
from strata.poset import find_poset_isomorphism, join_poset
from strata.simpset import circle, from_simplicial_complex, sphere0, standard_simplex
from strata.strat import (
    StratError,
    StratSpace,
    check_conditions,
    check_continuous,
    cone_strat,
    exhaustive_continuity,
    exhaustive_openness,
    face_poset,
    implication_violations,
    implications_harness,
    join_strat,
    random_strat_space,
    simplicial_stratification,
    single_stratum,
)


def test_antichain_labels_fail_with_edge_witness():
    x = StratSpace(*antichain_edge_labels())
    rep = check_conditions(x)
    assert not rep.holds("continuous")
    assert not rep.holds("closure_order")
    cell, face, lab = rep.conditions["continuous"].witness
    assert cell == x.space.cell_of((0, 1)) and lab == "c"
    assert face[0] == 0


def test_v_labels_pass():
    rep = check_conditions(StratSpace(*v_edge_labels()))
    assert rep.stratification


def test_vertex_with_open_triangle_not_locally_closed():
    x = StratSpace(*vertex_plus_open_triangle())
    rep = check_conditions(x)
    assert not rep.locally_closed["top"].ok
    assert rep.locally_closed["top"].witness is not None


def test_simplicial_stratification_of_simplex():
    x = simplicial_stratification(standard_simplex(2))
    assert len(face_poset(x)) == 7
    assert check_conditions(x).stratification


def test_hourglass_has_ten_strata():
    x = simplicial_stratification(hourglass())
    assert len(x.image) == 10
    rep = check_conditions(x)
    assert all(rep.holds(n) for n in ("continuous", "open", "closure_order", "frontier", "closed_unions"))


def test_face_poset_rejects_bad_order():
    with pytest.raises(StratError):
        face_poset(StratSpace(*antichain_edge_labels()))


def test_poset_module_wrapper():
    x = simplicial_stratification(circle(3))
    assert poset_face_poset(x) == face_poset(x)


def test_join_of_single_strata():
    j = join_strat(single_stratum(sphere0()), single_stratum(sphere0()))
    assert len(j.image) == 3
    rep = check_conditions(j)
    assert rep.holds("continuous") and rep.holds("open")
    assert not all(v.ok for v in rep.connected.values())
    assert homology(j.space).betti == [1, 1]


def test_cone_of_circle():
    c = cone_strat(simplicial_stratification(circle(3)))
    assert len(c.image) == 13
    assert check_conditions(c).stratification


@given(
    st.lists(st.sets(st.integers(0, 3), min_size=1, max_size=3), min_size=1, max_size=3),
    st.lists(st.sets(st.integers(0, 3), min_size=1, max_size=2), min_size=1, max_size=3),
)
@settings(max_examples=30, deadline=None)
def test_join_face_poset_law(fa, fb):
    a = simplicial_stratification(from_simplicial_complex(fa))
    b = simplicial_stratification(from_simplicial_complex(fb))
    fp = face_poset(join_strat(a, b))
    assert find_poset_isomorphism(fp, join_poset(face_poset(a), face_poset(b))) is not None


@given(st.integers(0, 100_000))
@settings(max_examples=200, deadline=None)
def test_implications_on_random_spaces(seed):
    x = random_strat_space(random.Random(seed), 12)
    assert implication_violations(x) == []


@given(st.integers(0, 100_000))
@settings(max_examples=100, deadline=None)
def test_subset_oracles_agree(seed):
    x = random_strat_space(random.Random(seed), 8)
    rep = check_conditions(x)
    assert exhaustive_continuity(x) == rep.holds("continuous")
    assert exhaustive_openness(x) == rep.holds("open")


def test_harness_is_deterministic():
    a = implications_harness(50, seed=11)
    b = implications_harness(50, seed=11)
    assert a.counts == b.counts and a.ok


def test_labels_must_cover_cells():
    x = standard_simplex(1)
    with pytest.raises(StratError):
        StratSpace(x, poset_face_poset(simplicial_stratification(x)), {})


def test_continuity_verdict_on_good_space():
    assert check_continuous(simplicial_stratification(circle(4))).ok
