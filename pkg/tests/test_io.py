from __future__ import annotations

import json

import pytest

from strata import io as sio
from strata.acyccat import chain_category, iso_check
from strata.fixtures import antichain_edge_labels, figure_one, hexagon_flow_category, hourglass, named_categories
from strata.morse import height_matching, hexagon_homs, two_cell_circle
from strata.poset import FinPoset, find_poset_isomorphism
from strata.simpset import boundary_simplex, circle, product, standard_simplex
from strata.stellar import unstable_stratification
from strata.strat import StratSpace


def through_json(obj: dict) -> dict:
    return json.loads(sio.dumps(obj))


@pytest.mark.parametrize("name", sorted(named_categories()))
def test_category_round_trip(name):
    c = named_categories()[name]
    back = sio.category_from_json(through_json(sio.category_to_json(c)))
    assert iso_check(back, c) is not None


def test_ordered_category_round_trip():
    c = hexagon_flow_category()
    back = sio.category_from_json(through_json(sio.category_to_json(c)))
    assert iso_check(back, c) is not None and back.hom_order


@pytest.mark.parametrize("x", [standard_simplex(3), circle(4), product(circle(3), circle(3)), figure_one().nondegenerate_nerve()])
def test_simpset_round_trip(x):
    back = sio.simpset_from_json(through_json(sio.simpset_to_json(x)))
    assert back.faces == x.faces
    assert back.f_vector == x.f_vector
    if x.keys is not None:
        assert back.keys == x.keys


def test_simplices_shorthand():
    x = sio.simpset_from_json({"simplices": [[0, 1, 2], [2, 3]]})
    assert x.f_vector == [4, 4, 1]


def test_poset_round_trip():
    p = FinPoset("abcd", [("a", "b"), ("b", "c"), ("a", "d")])
    back = sio.poset_from_json(through_json(sio.poset_to_json(p)))
    assert find_poset_isomorphism(p, back) is not None


def test_strat_round_trip():
    x = unstable_stratification(figure_one())
    back = sio.strat_from_json(through_json(sio.strat_to_json(x)))
    assert back.labels == x.labels
    y = StratSpace(*antichain_edge_labels())
    assert sio.strat_from_json(through_json(sio.strat_to_json(y))).labels == y.labels


def test_matching_round_trip():
    for c, m in (height_matching(), two_cell_circle()):
        back_c, back_m = sio.matching_from_json(through_json(sio.matching_to_json(c, m)))
        assert back_c.f_vector == c.f_vector
        assert set(map(tuple, back_m.pairs)) == set(m.pairs)


def test_matching_from_function():
    data = {"kind": "matching", "complex": {"simplices": [[0, 1]]}, "function": [[[0], "0"], [[1], "1/2"], [[0, 1], "1/3"]]}
    c, m = sio.matching_from_json(data)
    assert m.pairs == (((1,), (0, 1)),)


def test_flowhoms_round_trip():
    homs, comp = hexagon_homs()
    back, back_comp = sio.flowhoms_from_json(through_json(sio.flowhoms_to_json(homs, comp)))
    assert back == homs and back_comp == comp


def test_read_any(tmp_path):
    p = tmp_path / "c.json"
    p.write_text(sio.export(chain_category(2)))
    assert iso_check(sio.read_any(p), chain_category(2)) is not None
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(sio.FormatError):
        sio.read_any(bad)
    unknown = tmp_path / "u.json"
    unknown.write_text('{"kind": "mystery"}')
    with pytest.raises(sio.FormatError):
        sio.read_any(unknown)


def test_missing_field():
    with pytest.raises(sio.FormatError):
        sio.category_from_json({"objects": ["x"]})


def parse_off(text: str):
    lines = text.strip().splitlines()
    assert lines[0] == "OFF"
    nv, nf, _ = map(int, lines[1].split())
    faces = [tuple(map(int, line.split()[1:])) for line in lines[2 + nv :]]
    assert len(faces) == nf
    return nv, faces


def test_off_triangle_boundary():
    nv, faces = parse_off(sio.to_off(boundary_simplex(2)))
    assert nv == 3
    assert sorted(tuple(sorted(f)) for f in faces) == [(0, 1), (0, 2), (1, 2)]


def test_off_hourglass_and_simplex():
    nv, faces = parse_off(sio.to_off(hourglass()))
    assert all(len(f) == 3 for f in faces)
    nv, faces = parse_off(sio.to_off(standard_simplex(3)))
    assert nv == 4 and len(faces) == 4


def test_off_is_deterministic_and_rejects_high_dimension():
    b = figure_one().nondegenerate_nerve()
    assert sio.to_off(b) == sio.to_off(b)
    with pytest.raises(ValueError):
        sio.to_off(standard_simplex(4))


def test_jsonable_witness():
    assert json.dumps(sio.jsonable(((1, 0), (0, 0), "c"))) == '[[1, 0], [0, 0], "c"]'
