"""Small named inputs used by tests, the CLI and the acceptance suite."""

from __future__ import annotations

from fractions import Fraction

from .acyccat import AcycCat, EnrichedCat, chain_category, from_poset
from .poset import FinPoset, chain_poset
from .simpset import FinSimpSet, boundary_simplex, circle, from_simplicial_complex


def figure_one() -> AcycCat:
    """Objects ``x < y < z``; ``v: x -> y``, two arrows ``u1, u2: y -> z`` and their composites with ``v``."""
    mors = {
        "v": ("x", "y"),
        "u1": ("y", "z"),
        "u2": ("y", "z"),
        "u1v": ("x", "z"),
        "u2v": ("x", "z"),
    }
    comp = {("u1", "v"): "u1v", ("u2", "v"): "u2v"}
    return AcycCat(["x", "y", "z"], mors, comp, name="fig1")


def simplex_category(n: int) -> AcycCat:
    """``[n]`` as a category."""
    return chain_category(n)


def point_category() -> AcycCat:
    return AcycCat(["*"], {}, {}, name="point")


def two_point_opposite() -> AcycCat:
    """``C(x, y) = {f}`` and ``C(y, x) = {g}``: violates acyclicity."""
    return AcycCat(["x", "y"], {"f": ("x", "y"), "g": ("y", "x")}, {}, name="opposite-homs")


def nontrivial_monoid() -> AcycCat:
    """One object with an idempotent non-identity endomorphism."""
    return AcycCat(["*"], {"e": ("*", "*")}, {("e", "e"): "e"}, name="monoid")


def suspension_category(vertices: int = 3) -> EnrichedCat:
    """Two objects with ``C(x, y)`` a polygonal circle; its classifying space is a suspension."""
    return EnrichedCat(["x", "y"], {("x", "y"): circle(vertices)})


def sphere_face_poset(n: int) -> FinPoset:
    """Face poset of the boundary of ``Delta^n`` (proper nonempty faces)."""
    from .poset import poset_from_complex_faces

    b = boundary_simplex(n)
    p = poset_from_complex_faces(b)
    return FinPoset([b.key(c) for c in p.elements], [(b.key(a), b.key(c)) for a, c in p.covers])


def hexagon_flow_category() -> AcycCat:
    """Poset-enriched flow category of the height matching on the boundary of a tetrahedron.

    Objects are the two critical cells; the single nontrivial hom is the face
    poset of the boundary of the triangle ``[v1 v2 v3]``.
    """
    faces = sphere_face_poset(2)
    lo, hi = "v0", "v1v2v3"
    names = {f: "".join(f"v{i + 1}" for i in f) for f in faces}
    mors = {names[f]: (lo, hi) for f in faces}
    order = [(names[a], names[b]) for a, b in faces.covers]
    return AcycCat([lo, hi], mors, {}, hom_order=order, name="hexagon")


def tetra_boundary() -> FinSimpSet:
    """Boundary of ``[v0 v1 v2 v3]`` with vertices ``0..3``."""
    return boundary_simplex(3)


def tetra_height_function() -> dict[tuple, Fraction]:
    """A discrete Morse function on the boundary of a tetrahedron, keyed by vertex tuples.

    Its induced matching pairs ``vi`` with ``v0 vi`` and ``vi vj`` with
    ``v0 vi vj``; the critical cells are ``v0`` and ``v1 v2 v3``.
    """
    F = Fraction
    return {
        (0,): F(0),
        (1,): F(2),
        (2,): F(4),
        (3,): F(6),
        (0, 1): F(3, 2),
        (0, 2): F(7, 2),
        (0, 3): F(11, 2),
        (1, 2): F(7),
        (1, 3): F(8),
        (2, 3): F(9),
        (0, 1, 2): F(13, 2),
        (0, 1, 3): F(15, 2),
        (0, 2, 3): F(17, 2),
        (1, 2, 3): F(10),
    }


def hourglass() -> FinSimpSet:
    """Classifying space of :func:`figure_one`: two triangles sharing the vertex path."""
    return figure_one().nondegenerate_nerve()


def antichain_edge_labels() -> tuple[FinSimpSet, FinPoset, dict]:
    """``Delta^1`` with vertex labels ``a, b`` and edge label ``c`` in an antichain."""
    from .simpset import standard_simplex

    x = standard_simplex(1)
    labels = {x.cell_of((0,)): "a", x.cell_of((1,)): "b", x.cell_of((0, 1)): "c"}
    return x, FinPoset(["a", "b", "c"]), labels


def v_edge_labels() -> tuple[FinSimpSet, FinPoset, dict]:
    """``Delta^1`` with ``a, b < c``."""
    x, _, labels = antichain_edge_labels()
    return x, FinPoset(["a", "b", "c"], [("a", "c"), ("b", "c")]), labels


def vertex_plus_open_triangle() -> tuple[FinSimpSet, FinPoset, dict]:
    """``Delta^2`` where one stratum is the vertex ``0`` together with the open 2-cell."""
    from .simpset import standard_simplex

    x = standard_simplex(2)
    labels = {}
    for c in x.cells():
        key = x.key(c)
        labels[c] = "top" if key in ((0,), (0, 1, 2)) else str(key)
    elems = ["top"] + [str(x.key(c)) for c in x.cells() if labels[c] != "top"]
    rel = [(e, "top") for e in elems if e != "top"]
    return x, FinPoset(elems, rel), labels


def circle_two_cells() -> tuple[list, dict]:
    """Circle with vertices ``a, b`` and edges ``e1, e2`` both from ``a`` to ``b``."""
    cells = {"a": 0, "b": 0, "e1": 1, "e2": 1}
    faces = {"e1": ["a", "b"], "e2": ["a", "b"]}
    return cells, faces


def named_categories() -> dict[str, AcycCat]:
    cats = {"fig1": figure_one(), "point": point_category(), "hexagon": hexagon_flow_category()}
    for n in range(5):
        cats[f"[{n}]"] = simplex_category(n)
    return cats


__all__ = [
    "antichain_edge_labels",
    "circle_two_cells",
    "figure_one",
    "from_poset",
    "hexagon_flow_category",
    "hourglass",
    "named_categories",
    "nontrivial_monoid",
    "point_category",
    "simplex_category",
    "sphere_face_poset",
    "suspension_category",
    "tetra_boundary",
    "tetra_height_function",
    "two_point_opposite",
    "v_edge_labels",
    "vertex_plus_open_triangle",
    "chain_poset",
    "from_simplicial_complex",
]
