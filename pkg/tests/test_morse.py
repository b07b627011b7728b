from __future__ import annotations

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata.acyccat import iso_check
from strata.fixtures import hexagon_flow_category, tetra_height_function
from strata.homology import homology_of_complex
from strata.morse import (
    Matching,
    MorseError,
    classify_flow,
    dimension_function,
    flow_category,
    hasse_cycle,
    height_matching,
    hexagon_flow,
    matching,
    matching_to_morse_function,
    morse_complex,
    morse_function_to_matching,
    path_count_boundary,
    random_acyclic_matching,
    random_simplicial_complex,
    reg_from_cells,
    reg_from_simplices,
    reg_from_simpset,
    two_cell_circle,
    v_paths,
    validate_matching,
    vpath_cycle,
)
from strata.simpset import boundary_simplex, standard_simplex


def cyclic_triangle():
    c = reg_from_simpset(boundary_simplex(2))
    return c, matching(c, [((0,), (0, 1)), ((1,), (1, 2)), ((2,), (0, 2))])


def test_regular_complex_validates():
    c = reg_from_simpset(boundary_simplex(3))
    assert c.validate() == []
    assert c.f_vector == [4, 6, 4]
    assert c.signed


def test_diamond_violation_reported():
    c = reg_from_cells({"a": 0, "e": 1}, {"e": ["a"]})
    assert c.validate()


def test_structural_errors():
    c = reg_from_simpset(standard_simplex(2))
    with pytest.raises(MorseError):
        matching(c, [((0,), (1, 2))])
    with pytest.raises(MorseError):
        matching(c, [((0,), (0, 1)), ((0,), (0, 2))])


def test_height_matching():
    c, m = height_matching()
    assert len(m.pairs) == 6
    assert m.critical(c) == [(0,), (1, 2, 3)]
    assert validate_matching(c, m).acyclic


def test_height_morse_complex_is_sphere():
    c, m = height_matching()
    mc = morse_complex(c, m)
    assert mc.complex.ranks == [1, 0, 1]
    assert mc.homology.betti == [1, 0, 1]


def test_cyclic_matching_witnessed_by_both_routes():
    c, m = cyclic_triangle()
    rep = validate_matching(c, m)
    assert not rep.acyclic
    assert hasse_cycle(c, m) is not None and vpath_cycle(c, m) is not None
    assert set(rep.witness) <= set(c.cells)
    with pytest.raises(MorseError, match="acyclic"):
        morse_complex(c, m)


def test_collapsible_simplex():
    c = reg_from_simpset(standard_simplex(2))
    m = matching(c, [((1,), (0, 1)), ((2,), (1, 2)), ((0, 2), (0, 1, 2))])
    mc = morse_complex(c, m)
    assert mc.critical[0] == [(0,)] and mc.complex.ranks == [1, 0, 0]


def test_two_cell_circle_is_mod_two():
    c, m = two_cell_circle()
    assert not c.signed
    mc = morse_complex(c, m)
    assert mc.mod2_betti == [1, 1]
    assert len(v_paths(c, m, "e2")) == 2


def test_morse_function_round_trip():
    c, m = height_matching()
    f = matching_to_morse_function(c, m)
    assert all(isinstance(v, Fraction) for v in f.values())
    assert set(morse_function_to_matching(c, f).pairs) == set(m.pairs)
    assert morse_function_to_matching(c, tetra_height_function()).pairs == m.pairs


def test_dimension_function_has_no_pairs():
    c = reg_from_simpset(boundary_simplex(2))
    assert morse_function_to_matching(c, dimension_function(c)).pairs == ()


def test_non_morse_function_rejected():
    c = reg_from_simpset(standard_simplex(1))
    with pytest.raises(MorseError):
        morse_function_to_matching(c, {(0,): 1, (1,): 1, (0, 1): 0})


def test_hexagon_flow_matches_fixture():
    assert iso_check(hexagon_flow(), hexagon_flow_category()) is not None


def test_gap_two_hom_required():
    c, m = height_matching()
    with pytest.raises(MorseError):
        flow_category(c, m)


def test_classify_hexagon():
    rep = classify_flow(hexagon_flow())
    assert rep.prismatic == [2, 6, 6]
    assert rep.space.f_vector == [2, 12, 12]
    assert rep.strata == 2 and rep.ok
    assert rep.homology.betti == [1, 0, 1]


def test_classify_circle():
    c, m = two_cell_circle()
    rep = classify_flow(flow_category(c, m))
    assert rep.strata == 2 and rep.homology.betti == [1, 1]


@given(st.integers(0, 1_000_000))
@settings(max_examples=100, deadline=None)
def test_random_matchings(seed):
    rng = random.Random(seed)
    c = random_simplicial_complex(rng)
    m = random_acyclic_matching(rng, c)
    assert (hasse_cycle(c, m) is None) and (vpath_cycle(c, m) is None)
    mc = morse_complex(c, m)
    ref = homology_of_complex(c.chain_complex())
    assert (mc.homology.betti, mc.homology.torsion) == (ref.betti, ref.torsion)
    crit = {x for cs in mc.critical.values() for x in cs}
    for d in range(1, c.dim + 1):
        row = {x: i for i, x in enumerate(mc.critical[d - 1])}
        for j, tau in enumerate(mc.critical[d]):
            counts = path_count_boundary(c, m, tau)
            for s, w in counts.items():
                assert s in crit
                assert mc.complex.boundary(d)[row[s], j] == w
            assert sum(abs(v) for v in mc.complex.boundary(d)[:, j]) == sum(abs(w) for w in counts.values() if w)


@given(st.integers(0, 1_000_000))
@settings(max_examples=50, deadline=None)
def test_random_morse_function_round_trip(seed):
    rng = random.Random(seed)
    c = random_simplicial_complex(rng, 30)
    m = random_acyclic_matching(rng, c)
    f = matching_to_morse_function(c, m)
    assert set(morse_function_to_matching(c, f).pairs) == set(m.pairs)


@given(st.integers(0, 1_000_000))
@settings(max_examples=50, deadline=None)
def test_added_pair_can_only_break_acyclicity_consistently(seed):
    rng = random.Random(seed)
    c = reg_from_simplices([(0, 1, 2), (1, 2, 3), (2, 3, 4), (0, 4)])
    covers = c.covers()
    rng.shuffle(covers)
    pairs, used = [], set()
    for lo, hi in covers[:6]:
        if lo not in used and hi not in used:
            pairs.append((lo, hi))
            used |= {lo, hi}
    m = Matching(tuple(pairs))
    assert (hasse_cycle(c, m) is None) == (vpath_cycle(c, m) is None)
