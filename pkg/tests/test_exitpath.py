from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.acyccat import chain_category, random_acyclic_category
from strata.exitpath import (
    Horn,
    build_chart,
    canonical,
    chain_fragment,
    cover,
    exhaustive_horns,
    exit_fragments,
    fragment_face,
    horn_fill,
    is_exit_simplex,
    verify_chart,
)
from strata.fixtures import figure_one, point_category
from strata.stellar import unstable_stratification


@pytest.fixture
def fig1():
    return unstable_stratification(figure_one())


def test_chain_cells_are_exit(fig1):
    for cell in fig1.space.cells():
        assert is_exit_simplex(fig1, (cell, tuple(range(cell[0] + 1))))


def test_constant_simplex_is_exit(fig1):
    x = fig1.space.cell_of((("x",), ()))
    assert is_exit_simplex(fig1, (x, (0, 0, 0)))


def test_reversed_edge_is_not_exit(fig1):
    v = fig1.space.cell_of((("x", "y"), ("v",)))
    assert not is_exit_simplex(fig1, (v, (1, 0)))


def test_canonical_restricts_to_carrier(fig1):
    t = fig1.space.cell_of((("x", "y", "z"), ("v", "u1")))
    cell, g = canonical(fig1.space, t, (0, 0, 2))
    assert fig1.space.key(cell) == (("x", "z"), ("u1v",))
    assert g == (0, 0, 1)


def test_chart_at_y_has_six_cells():
    ch = build_chart(figure_one(), "y")
    assert len(ch.open_image()) == 6
    assert verify_chart(ch).ok


def test_chart_of_two_simplex_at_middle():
    ch = build_chart(chain_category(2), 1)
    assert sorted(ch.bc.key(c)[0] for c in ch.open_image()) == [(0, 1), (0, 1, 2), (1,), (1, 2)]


def test_minimal_object_of_chain_sees_everything_in_closed_star():
    ch = build_chart(chain_category(2), 0)
    assert {img for _, img in ch.n_map.values()} == set(ch.bc.cells())


@pytest.mark.parametrize("c", [figure_one(), chain_category(3), point_category()], ids=["fig1", "[3]", "point"])
def test_cover(c):
    rep = cover(c)
    assert rep.ok, rep.report.failures()
    assert rep.covered == set(c.nondegenerate_nerve().cells())


def test_composition_fills_the_two_horn(fig1):
    sp = fig1.space
    v = sp.cell_of((("x", "y"), ("v",)))
    u1 = sp.cell_of((("y", "z"), ("u1",)))
    filler = horn_fill(fig1, Horn(2, 1, {0: (u1, (0, 1)), 2: (v, (0, 1))}))
    assert filler == (sp.cell_of((("x", "y", "z"), ("v", "u1"))), (0, 1, 2))


def test_degenerate_edge_horn_fills_with_degeneracy(fig1):
    sp = fig1.space
    v = sp.cell_of((("x", "y"), ("v",)))
    x = sp.cell_of((("x",), ()))
    filler = horn_fill(fig1, Horn(2, 1, {0: (v, (0, 1)), 2: (x, (0, 0))}))
    assert filler == (v, (0, 0, 1))


def test_malformed_horn_rejected(fig1):
    sp = fig1.space
    v = sp.cell_of((("x", "y"), ("v",)))
    with pytest.raises(ValueError):
        horn_fill(fig1, Horn(2, 0, {1: (v, (0, 1)), 2: (v, (0, 1))}))
    u1 = sp.cell_of((("y", "z"), ("u1",)))
    with pytest.raises(ValueError):
        horn_fill(fig1, Horn(2, 1, {0: (v, (0, 1)), 2: (u1, (0, 1))}))


def test_exit_faces_of_exit_simplices_are_exit(fig1):
    for f in exit_fragments(fig1, 2):
        for i in range(3):
            assert is_exit_simplex(fig1, fragment_face(fig1.space, f, i))


def test_chain_fragment(fig1):
    cell, g = chain_fragment(fig1, (("x", "y"), ("v",)))
    assert g == (0, 1) and cell[0] == 1


@given(st.integers(0, 100_000))
@settings(max_examples=15, deadline=None)
def test_horns_fill_on_small_random_categories(seed):
    c = random_acyclic_category(random.Random(seed), max_objects=4, max_hom=2)
    assert exhaustive_horns(unstable_stratification(c), 3).ok


@given(st.integers(0, 100_000))
@settings(max_examples=40, deadline=None)
def test_charts_on_random_categories(seed):
    c = random_acyclic_category(random.Random(seed), max_objects=5, max_hom=3)
    assert cover(c).ok
