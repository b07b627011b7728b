from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from strata import kernels
from strata.homology import chain_complex, homology, mod2_betti, reduced_betti
from strata.simpset import boundary_simplex, circle, from_simplicial_complex, product, standard_simplex

RP2 = [(1, 2, 3), (1, 3, 4), (1, 4, 5), (1, 5, 6), (1, 2, 6), (2, 3, 5), (2, 4, 5), (2, 4, 6), (3, 4, 6), (3, 5, 6)]


def test_sphere():
    h = homology(boundary_simplex(3))
    assert h.betti == [1, 0, 1]
    assert h.as_dict()["groups"] == ["Z", "0", "Z"]


def test_torus():
    assert homology(product(circle(3), circle(3))).betti == [1, 2, 1]


def test_projective_plane_torsion():
    h = homology(from_simplicial_complex(RP2))
    assert h.betti == [1, 0, 0]
    assert h.torsion[1] == [2]
    assert mod2_betti(from_simplicial_complex(RP2)) == [1, 1, 1]


def test_simplex_is_acyclic():
    assert reduced_betti(standard_simplex(3)) == [0, 0, 0, 0]


def test_boundary_squares_to_zero():
    assert chain_complex(product(standard_simplex(1), standard_simplex(2))).squares_to_zero()


@pytest.mark.parametrize("backend", ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else []))
def test_backends_agree(backend):
    x = from_simplicial_complex(RP2)
    assert homology(x, backend=backend).as_dict() == homology(x, backend="python").as_dict()


@given(st.lists(st.sets(st.integers(0, 6), min_size=1, max_size=4), min_size=1, max_size=6))
@settings(max_examples=50, deadline=None)
def test_euler_from_betti(facets):
    x = from_simplicial_complex(facets)
    h = homology(x)
    assert sum((-1) ** k * b for k, b in enumerate(h.betti)) == x.euler_characteristic()
