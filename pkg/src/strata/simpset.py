"""Finite simplicial sets stored by their nondegenerate simplices.

A cell is a pair ``(dim, id)`` naming a nondegenerate simplex.  A general
(possibly degenerate) simplex is a pair ``(surj, cell)`` where ``surj`` is a
monotone surjection ``[n] -> [dim]`` written as its image tuple; this is the
Eilenberg-Zilber normal form ``x = s_{j1}...s_{jk} y`` with the ``j``'s being
the positions ``i`` where ``surj[i] == surj[i + 1]``.

Every face ``d_i`` of a stored ``n``-cell is such a pair, so the structure is
genuinely simplicial: degenerate faces (loops, collapsed edges, diagonal
simplices of products) are representable.
"""

from __future__ import annotations

from collections.abc import Callable, Hashable, Iterable, Iterator, Sequence
from itertools import combinations
from math import comb

Cell = tuple[int, int]
Surj = tuple[int, ...]
Simplex = tuple[Surj, Cell]


class SimplicialError(ValueError):
    """Raised for malformed simplicial data."""


# ---------------------------------------------------------------------------
# monotone maps


def identity(n: int) -> Surj:
    return tuple(range(n + 1))


def coface(n: int, i: int) -> tuple[int, ...]:
    """The injection ``[n - 1] -> [n]`` skipping ``i``."""
    return tuple(j for j in range(n + 1) if j != i)


def repeats(surj: Surj) -> frozenset[int]:
    return frozenset(i for i in range(len(surj) - 1) if surj[i] == surj[i + 1])


def surj_from_repeats(n: int, reps: Iterable[int]) -> Surj:
    """Monotone surjection out of ``[n]`` collapsing ``i`` onto ``i + 1`` for ``i`` in ``reps``."""
    reps = set(reps)
    out = [0]
    for i in range(n):
        out.append(out[-1] if i in reps else out[-1] + 1)
    return tuple(out)


def degeneracy_word(surj: Surj) -> list[int]:
    """Normal-form word ``[j1, ..., jk]`` with ``j1 > ... > jk``."""
    return sorted(repeats(surj), reverse=True)


def surj_from_word(word: Sequence[int], target_dim: int) -> Surj:
    n = target_dim + len(word)
    if len(set(word)) != len(word) or any(j < 0 or j >= n for j in word):
        raise SimplicialError(f"degeneracy word {list(word)} is not a normal form")
    if list(word) != sorted(word, reverse=True):
        raise SimplicialError(f"degeneracy word {list(word)} is not strictly decreasing")
    return surj_from_repeats(n, word)


def compose(outer: Sequence[int], inner: Sequence[int]) -> tuple[int, ...]:
    """``outer o inner`` for maps written as image tuples."""
    return tuple(outer[k] for k in inner)


def factor(phi: Sequence[int]) -> tuple[Surj, tuple[int, ...]]:
    """Epi-mono factorisation of a monotone map: ``phi = mono o epi``."""
    mono = tuple(sorted(set(phi)))
    pos = {v: k for k, v in enumerate(mono)}
    return tuple(pos[v] for v in phi), mono


def split_common(surjs: Sequence[Surj]) -> tuple[Surj, list[Surj]]:
    """Factor out the common degeneracy of several surjections on ``[n]``.

    Returns ``(rho, rest)`` with ``surjs[k] == compose(rest[k], rho)`` and the
    ``rest`` maps sharing no repeat position.
    """
    n = len(surjs[0]) - 1
    common = frozenset.intersection(*(repeats(s) for s in surjs)) if surjs else frozenset()
    rho = surj_from_repeats(n, common)
    section = {}
    for i, r in enumerate(rho):
        section.setdefault(r, i)
    rest = [tuple(s[section[r]] for r in range(rho[-1] + 1)) for s in surjs]
    return rho, rest


# ---------------------------------------------------------------------------
# the simplicial set


class FinSimpSet:
    """Finite simplicial set in Eilenberg-Zilber normal form.

    ``faces[n][k]`` lists, for ``i = 0..n``, the pair ``(surj, target_id)``
    describing ``d_i`` of the ``k``-th nondegenerate ``n``-simplex; the
    target lives in dimension ``surj[-1]``.  ``keys`` optionally records the
    combinatorial object each cell stands for (a chain, a subset, ...).
    """

    __slots__ = ("faces", "keys", "names", "meta", "_index", "_restrict_cache")

    def __init__(
        self,
        faces: Sequence[Sequence[Sequence[tuple[Surj, int]]]],
        keys: Sequence[Sequence[Hashable]] | None = None,
        names: dict[Cell, str] | None = None,
        meta: dict | None = None,
    ):
        self.faces = tuple(tuple(tuple((tuple(s), int(t)) for s, t in fs) for fs in level) for level in faces)
        while self.faces and not self.faces[-1]:
            self.faces = self.faces[:-1]
        self.keys = None if keys is None else tuple(tuple(level) for level in keys)[: len(self.faces)]
        self.names = dict(names or {})
        self.meta = dict(meta or {})
        self._index: dict[Hashable, Cell] | None = None
        self._restrict_cache: dict = {}
        self._check_shape()

    # -- basic data -------------------------------------------------------

    def _check_shape(self) -> None:
        for n, level in enumerate(self.faces):
            for k, fs in enumerate(level):
                if n == 0:
                    if fs:
                        raise SimplicialError(f"0-simplex {k} has faces")
                    continue
                if len(fs) != n + 1:
                    raise SimplicialError(f"simplex {(n, k)} has {len(fs)} faces, expected {n + 1}")
                for surj, t in fs:
                    if len(surj) != n or surj[0] != 0 or any(b - a not in (0, 1) for a, b in zip(surj, surj[1:])):
                        raise SimplicialError(f"face of {(n, k)} has malformed degeneracy {surj}")
                    d = surj[-1]
                    if d >= len(self.faces) or not 0 <= t < len(self.faces[d]):
                        raise SimplicialError(f"face of {(n, k)} points at missing simplex {(d, t)}")
        if self.keys is not None:
            if [len(level) for level in self.keys] != self.f_vector:
                raise SimplicialError("keys do not match the simplex counts")

    @property
    def dim(self) -> int:
        return len(self.faces) - 1

    @property
    def f_vector(self) -> list[int]:
        return [len(level) for level in self.faces]

    def is_empty(self) -> bool:
        return not self.faces

    def cells(self, dim: int | None = None) -> Iterator[Cell]:
        dims = range(len(self.faces)) if dim is None else ([dim] if 0 <= dim < len(self.faces) else [])
        for n in dims:
            for k in range(len(self.faces[n])):
                yield (n, k)

    def num_cells(self) -> int:
        return sum(self.f_vector)

    def euler_characteristic(self) -> int:
        return sum((-1) ** n * c for n, c in enumerate(self.f_vector))

    def key(self, cell: Cell) -> Hashable:
        if self.keys is None:
            return cell
        return self.keys[cell[0]][cell[1]]

    def cell_of(self, key: Hashable) -> Cell:
        if self._index is None:
            self._index = {}
            if self.keys is not None:
                for n, level in enumerate(self.keys):
                    for k, key_ in enumerate(level):
                        self._index[key_] = (n, k)
        try:
            return self._index[key]
        except KeyError:
            raise KeyError(f"no simplex with key {key!r}") from None

    def has_key(self, key: Hashable) -> bool:
        try:
            self.cell_of(key)
        except KeyError:
            return False
        return True

    def name(self, cell: Cell) -> str:
        if cell in self.names:
            return self.names[cell]
        return str(self.key(cell))

    # -- simplicial operators ---------------------------------------------

    def face(self, cell: Cell, i: int) -> Simplex:
        n, k = cell
        surj, t = self.faces[n][k][i]
        return surj, (surj[-1], t)

    def act(self, simplex: Simplex, phi: Sequence[int]) -> Simplex:
        """Apply the simplicial operator of a monotone ``phi: [p] -> [n]``."""
        theta, cell = simplex
        epi, mono = factor(compose(theta, phi))
        alpha, target = self._restrict(cell, mono)
        return compose(alpha, epi), target

    def _restrict(self, cell: Cell, mono: tuple[int, ...]) -> Simplex:
        n = cell[0]
        if len(mono) == n + 1:
            return identity(n), cell
        hit = (cell, mono)
        got = self._restrict_cache.get(hit)
        if got is not None:
            return got
        missing = max(set(range(n + 1)) - set(mono))
        shifted = tuple(v - 1 if v > missing else v for v in mono)
        got = self.act(self.face(cell, missing), shifted)
        self._restrict_cache[hit] = got
        return got

    def gface(self, simplex: Simplex, i: int) -> Simplex:
        """``d_i`` of a general simplex."""
        return self.act(simplex, coface(len(simplex[0]) - 1, i))

    def degenerate(self, simplex: Simplex, j: int) -> Simplex:
        """``s_j`` of a general simplex."""
        n = len(simplex[0]) - 1
        return self.act(simplex, tuple(k if k <= j else k - 1 for k in range(n + 2)))

    def vertices(self, cell: Cell) -> tuple[int, ...]:
        n = cell[0]
        return tuple(self._restrict(cell, (j,))[1][1] for j in range(n + 1))

    def gvertices(self, simplex: Simplex) -> tuple[int, ...]:
        vs = self.vertices(simplex[1])
        return tuple(vs[j] for j in simplex[0])

    def as_simplex(self, cell: Cell) -> Simplex:
        return identity(cell[0]), cell

    def boundary_cells(self, cell: Cell) -> set[Cell]:
        """Nondegenerate cells underlying the codimension-one faces."""
        if cell[0] == 0:
            return set()
        return {self.face(cell, i)[1] for i in range(cell[0] + 1)}

    def closure(self, cells: Iterable[Cell]) -> set[Cell]:
        out: set[Cell] = set()
        stack = list(cells)
        while stack:
            c = stack.pop()
            if c in out:
                continue
            out.add(c)
            stack.extend(self.boundary_cells(c))
        return out

    def cofaces(self) -> dict[Cell, set[Cell]]:
        up: dict[Cell, set[Cell]] = {c: set() for c in self.cells()}
        for c in self.cells():
            for f in self.boundary_cells(c):
                up[f].add(c)
        return up

    # -- validation ---------------------------------------------------------

    def check_identities(self) -> list[tuple[Cell, int, int]]:
        """Every violation of ``d_i d_j = d_{j-1} d_i`` (``i < j``)."""
        bad = []
        for n in range(2, len(self.faces)):
            for k in range(len(self.faces[n])):
                c = (n, k)
                for j in range(n + 1):
                    for i in range(j):
                        lhs = self.gface(self.face(c, j), i)
                        rhs = self.gface(self.face(c, i), j - 1)
                        if lhs != rhs:
                            bad.append((c, i, j))
        return bad

    def validate(self) -> None:
        bad = self.check_identities()
        if bad:
            c, i, j = bad[0]
            raise SimplicialError(f"simplicial identity d_{i} d_{j} = d_{j - 1} d_{i} fails on {c}")

    # -- comparison ---------------------------------------------------------

    def structure(self) -> tuple:
        return self.faces

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinSimpSet):
            return NotImplemented
        return self.faces == other.faces and self.keys == other.keys

    def __hash__(self) -> int:
        return hash(self.faces)

    def __repr__(self) -> str:
        return f"FinSimpSet(f_vector={self.f_vector})"

    def vertex_determined(self) -> bool:
        """Whether each nondegenerate simplex is fixed by its vertex tuple."""
        seen = set()
        for c in self.cells():
            vs = self.vertices(c)
            if len(set(vs)) != len(vs) or vs in seen:
                return False
            seen.add(vs)
        return True

    def simplex_by_vertices(self, verts: Sequence[int]) -> Simplex:
        """General simplex with the given vertex sequence (vertex-determined sets only)."""
        table = self.meta.get("_by_vertices")
        if table is None:
            table = {self.vertices(c): c for c in self.cells()}
            self.meta["_by_vertices"] = table
        epi, distinct = _collapse(verts)
        try:
            return epi, table[distinct]
        except KeyError:
            raise SimplicialError(f"no simplex on vertices {tuple(verts)}") from None


def _collapse(verts: Sequence[int]) -> tuple[Surj, tuple[int, ...]]:
    epi = []
    distinct: list[int] = []
    for v in verts:
        if not distinct or distinct[-1] != v:
            distinct.append(v)
        epi.append(len(distinct) - 1)
    return tuple(epi), tuple(distinct)


# ---------------------------------------------------------------------------
# construction helpers


def build(
    levels: Sequence[Sequence[Hashable]],
    face_fn: Callable[[Hashable, int], tuple[Surj, Hashable]],
    names: Callable[[Hashable], str] | None = None,
    meta: dict | None = None,
) -> FinSimpSet:
    """Assemble a simplicial set from keyed cells and a face function.

    ``face_fn(key, i)`` returns ``d_i`` of the cell ``key`` as a pair
    ``(surj, face_key)``; ``face_key`` must name a cell of dimension
    ``surj[-1]`` listed in ``levels``.
    """
    levels = [list(level) for level in levels]
    while levels and not levels[-1]:
        levels.pop()
    index = {}
    for n, level in enumerate(levels):
        for k, key in enumerate(level):
            if key in index:
                raise SimplicialError(f"duplicate cell key {key!r}")
            index[key] = (n, k)
    faces = []
    for n, level in enumerate(levels):
        rows = []
        for key in level:
            if n == 0:
                rows.append(())
                continue
            fs = []
            for i in range(n + 1):
                surj, fkey = face_fn(key, i)
                surj = tuple(surj)
                try:
                    d, t = index[fkey]
                except KeyError:
                    raise SimplicialError(f"face {i} of {key!r} is missing cell {fkey!r}") from None
                if d != surj[-1] or len(surj) != n:
                    raise SimplicialError(f"face {i} of {key!r} has the wrong dimension")
                fs.append((surj, t))
            rows.append(tuple(fs))
        faces.append(rows)
    cell_names = {}
    if names is not None:
        for key, cell in index.items():
            cell_names[cell] = names(key)
    return FinSimpSet(faces, keys=levels, names=cell_names, meta=meta)


def empty() -> FinSimpSet:
    return FinSimpSet([], keys=[])


def point() -> FinSimpSet:
    return standard_simplex(0)


def standard_simplex(n: int) -> FinSimpSet:
    """``Delta^n``; cells are the nonempty subsets of ``{0..n}`` as sorted tuples."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    levels = [list(combinations(range(n + 1), k + 1)) for k in range(n + 1)]
    return build(levels, lambda key, i: (identity(len(key) - 2), key[:i] + key[i + 1 :]))


def boundary_simplex(n: int) -> FinSimpSet:
    """``d Delta^n``: proper faces of the ``n``-simplex."""
    levels = [list(combinations(range(n + 1), k + 1)) for k in range(n)]
    return build(levels, lambda key, i: (identity(len(key) - 2), key[:i] + key[i + 1 :]))


def from_simplicial_complex(simplices: Iterable[Iterable[Hashable]]) -> FinSimpSet:
    """Ordered simplicial complex generated by the given vertex sets.

    Vertices are ordered by ``sorted``; cells are keyed by sorted vertex tuples.
    """
    closed: set[tuple] = set()
    for s in simplices:
        s = tuple(sorted(set(s)))
        for k in range(1, len(s) + 1):
            closed.update(combinations(s, k))
    if not closed:
        return empty()
    top = max(len(s) for s in closed)
    levels = [sorted(s for s in closed if len(s) == k + 1) for k in range(top)]
    return build(levels, lambda key, i: (identity(len(key) - 2), key[:i] + key[i + 1 :]))


def circle(vertices: int = 3) -> FinSimpSet:
    """Boundary of a polygon as an ordered simplicial complex (``vertices >= 3``)."""
    edges = [(k, k + 1) for k in range(vertices - 1)] + [(0, vertices - 1)]
    return from_simplicial_complex(edges)


def sphere0() -> FinSimpSet:
    return from_simplicial_complex([(0,), (1,)])


def disjoint_union(a: FinSimpSet, b: FinSimpSet) -> FinSimpSet:
    levels = []
    for n in range(max(len(a.faces), len(b.faces))):
        levels.append([("a", c) for c in a.cells(n)] + [("b", c) for c in b.cells(n)])

    def face_fn(key, i):
        side, c = key
        s = a if side == "a" else b
        surj, f = s.face(c, i)
        return surj, (side, f)

    return build(levels, face_fn)


# ---------------------------------------------------------------------------
# products


def _shuffle_pairs(p: int, q: int) -> Iterator[tuple[int, frozenset[int], frozenset[int]]]:
    """Nondegenerate pairs of degeneracies of a ``p``- and a ``q``-simplex."""
    for n in range(max(p, q), p + q + 1):
        for r1 in combinations(range(n), n - p):
            s1 = frozenset(r1)
            for r2 in combinations(range(n), n - q):
                if s1.isdisjoint(r2):
                    yield n, s1, frozenset(r2)


def product(a: FinSimpSet, b: FinSimpSet) -> FinSimpSet:
    """Levelwise product; cells keyed by ``(surj_a, cell_a, surj_b, cell_b)``."""
    by_dim: dict[int, list] = {}
    for ca in a.cells():
        for cb in b.cells():
            for n, r1, r2 in _shuffle_pairs(ca[0], cb[0]):
                by_dim.setdefault(n, []).append((surj_from_repeats(n, r1), ca, surj_from_repeats(n, r2), cb))
    levels = [by_dim.get(n, []) for n in range(max(by_dim, default=-1) + 1)]

    def face_fn(key, i):
        sa, ca, sb, cb = key
        n = len(sa) - 1
        delta = coface(n, i)
        xa = a.act((sa, ca), delta)
        xb = b.act((sb, cb), delta)
        rho, (ra, rb) = split_common([xa[0], xb[0]])
        return rho, (ra, xa[1], rb, xb[1])

    return build(levels, face_fn)


def projections(prod: FinSimpSet) -> tuple[dict[Cell, Simplex], dict[Cell, Simplex]]:
    pa, pb = {}, {}
    for c in prod.cells():
        sa, ca, sb, cb = prod.key(c)
        pa[c] = (sa, ca)
        pb[c] = (sb, cb)
    return pa, pb


# ---------------------------------------------------------------------------
# joins and cones


def join(a: FinSimpSet, b: FinSimpSet) -> FinSimpSet:
    """Join ``a * b``; cells keyed ``("L", cell)``, ``("R", cell)``, ``("J", cell_a, cell_b)``."""
    by_dim: dict[int, list] = {}
    for c in a.cells():
        by_dim.setdefault(c[0], []).append(("L", c))
    for c in b.cells():
        by_dim.setdefault(c[0], []).append(("R", c))
    for ca in a.cells():
        for cb in b.cells():
            by_dim.setdefault(ca[0] + cb[0] + 1, []).append(("J", ca, cb))
    levels = [by_dim.get(n, []) for n in range(max(by_dim, default=-1) + 1)]

    def face_fn(key, i):
        if key[0] == "L":
            surj, f = a.face(key[1], i)
            return surj, ("L", f)
        if key[0] == "R":
            surj, f = b.face(key[1], i)
            return surj, ("R", f)
        _, ca, cb = key
        p, q = ca[0], cb[0]
        if i <= p:
            if p == 0:
                return identity(q), ("R", cb)
            surj, f = a.face(ca, i)
            top = surj[-1]
            return surj + tuple(top + 1 + j for j in range(q + 1)), ("J", f, cb)
        j = i - p - 1
        if q == 0:
            return identity(p), ("L", ca)
        surj, f = b.face(cb, j)
        return identity(p) + tuple(p + 1 + s for s in surj), ("J", ca, f)

    return build(levels, face_fn)


def cone(x: FinSimpSet, apex: str = "left") -> FinSimpSet:
    """``{*} * x`` (apex first) or ``x * {*}`` (apex last); apex cell in ``meta['apex']``."""
    if apex == "left":
        out = join(point(), x)
        out.meta["apex"] = out.cell_of(("L", (0, 0)))
    elif apex == "right":
        out = join(x, point())
        out.meta["apex"] = out.cell_of(("R", (0, 0)))
    else:
        raise ValueError("apex must be 'left' or 'right'")
    return out


# ---------------------------------------------------------------------------
# bisimplicial sets and their diagonals

BiSimplex = tuple[Surj, Surj, Hashable]


class Bisimplicial:
    """Finite bisimplicial set presented by bi-nondegenerate generators.

    ``gens`` maps each generator key to its bidegree ``(p, q)``.  The face
    functions return general bisimplices ``(surj_h, surj_v, key)``:
    ``hface(key, i)`` is ``d^h_i`` (``0 <= i <= p``, needs ``p >= 1``) and
    ``vface(key, j)`` is ``d^v_j`` (``0 <= j <= q``, needs ``q >= 1``).
    """

    def __init__(
        self,
        gens: dict[Hashable, tuple[int, int]],
        hface: Callable[[Hashable, int], BiSimplex],
        vface: Callable[[Hashable, int], BiSimplex],
    ):
        self.gens = dict(gens)
        self._hface = hface
        self._vface = vface
        self._cache: dict = {}

    def bidegree(self, key: Hashable) -> tuple[int, int]:
        return self.gens[key]

    def hface(self, key, i) -> BiSimplex:
        got = self._hface(key, i)
        self._check_target(got, self.gens[key][0] - 1, self.gens[key][1])
        return got

    def vface(self, key, j) -> BiSimplex:
        got = self._vface(key, j)
        self._check_target(got, self.gens[key][0], self.gens[key][1] - 1)
        return got

    def _check_target(self, got: BiSimplex, p: int, q: int) -> None:
        sh, sv, k = got
        if k not in self.gens:
            raise SimplicialError(f"face refers to unknown generator {k!r}")
        if len(sh) != p + 1 or len(sv) != q + 1 or (sh[-1], sv[-1]) != self.gens[k]:
            raise SimplicialError(f"face of bidegree mismatch at {k!r}")

    def act(self, x: BiSimplex, phi_h: Sequence[int], phi_v: Sequence[int]) -> BiSimplex:
        sh, sv, key = x
        epi_h, mono_h = factor(compose(sh, phi_h))
        epi_v, mono_v = factor(compose(sv, phi_v))
        ah, av, k = self._restrict(key, mono_h, mono_v)
        return compose(ah, epi_h), compose(av, epi_v), k

    def _restrict(self, key, mono_h, mono_v) -> BiSimplex:
        p, q = self.gens[key]
        if len(mono_h) == p + 1 and len(mono_v) == q + 1:
            return identity(p), identity(q), key
        hit = (key, mono_h, mono_v)
        got = self._cache.get(hit)
        if got is not None:
            return got
        if len(mono_h) < p + 1:
            i = max(set(range(p + 1)) - set(mono_h))
            shifted = tuple(v - 1 if v > i else v for v in mono_h)
            got = self.act(self.hface(key, i), shifted, mono_v)
        else:
            j = max(set(range(q + 1)) - set(mono_v))
            shifted = tuple(v - 1 if v > j else v for v in mono_v)
            got = self.act(self.vface(key, j), mono_h, shifted)
        self._cache[hit] = got
        return got

    def check_identities(self) -> list[str]:
        """Violations of the horizontal, vertical and mixed face identities."""
        bad = []
        for key, (p, q) in self.gens.items():
            x = (identity(p), identity(q), key)
            for j in range(p + 1):
                for i in range(j):
                    if p >= 2:
                        lhs = self.act(x, coface(p, j), identity(q))
                        lhs = self.act(lhs, coface(p - 1, i), identity(q))
                        rhs = self.act(self.act(x, coface(p, i), identity(q)), coface(p - 1, j - 1), identity(q))
                        if lhs != rhs:
                            bad.append(f"horizontal d_{i} d_{j} at {key!r}")
            for j in range(q + 1):
                for i in range(j):
                    if q >= 2:
                        lhs = self.act(self.act(x, identity(p), coface(q, j)), identity(p), coface(q - 1, i))
                        rhs = self.act(self.act(x, identity(p), coface(q, i)), identity(p), coface(q - 1, j - 1))
                        if lhs != rhs:
                            bad.append(f"vertical d_{i} d_{j} at {key!r}")
            if p >= 1 and q >= 1:
                for i in range(p + 1):
                    for j in range(q + 1):
                        hv = self.act(self.hface(key, i), identity(p - 1), coface(q, j))
                        vh = self.act(self.vface(key, j), coface(p, i), identity(q - 1))
                        if hv != vh:
                            bad.append(f"mixed d^h_{i} d^v_{j} at {key!r}")
        return bad


def diagonal(bi: Bisimplicial, validate: bool = True) -> FinSimpSet:
    """Diagonal simplicial set; cells keyed ``(surj_h, surj_v, generator)``."""
    if validate:
        bad = bi.check_identities()
        if bad:
            raise SimplicialError("malformed bisimplicial identities: " + bad[0])
    by_dim: dict[int, list] = {}
    for key, (p, q) in bi.gens.items():
        for n, r1, r2 in _shuffle_pairs(p, q):
            by_dim.setdefault(n, []).append((surj_from_repeats(n, r1), surj_from_repeats(n, r2), key))
    levels = [by_dim.get(n, []) for n in range(max(by_dim, default=-1) + 1)]

    def face_fn(cell_key, i):
        sh, sv, key = cell_key
        n = len(sh) - 1
        delta = coface(n, i)
        th, tv, k = bi.act((sh, sv, key), delta, delta)
        rho, (rh, rv) = split_common([th, tv])
        return rho, (rh, rv, k)

    return build(levels, face_fn)


def external_product(a: FinSimpSet, b: FinSimpSet) -> Bisimplicial:
    """``a`` horizontally times ``b`` vertically; its diagonal is ``product(a, b)``."""
    gens = {(ca, cb): (ca[0], cb[0]) for ca in a.cells() for cb in b.cells()}

    def hface(key, i):
        ca, cb = key
        surj, f = a.face(ca, i)
        return surj, identity(cb[0]), (f, cb)

    def vface(key, j):
        ca, cb = key
        surj, f = b.face(cb, j)
        return identity(ca[0]), surj, (ca, f)

    return Bisimplicial(gens, hface, vface)


def constant_bisimplicial(a: FinSimpSet, direction: str = "vertical") -> Bisimplicial:
    """``a`` placed in one direction, constant in the other."""
    if direction == "vertical":
        gens = {c: (0, c[0]) for c in a.cells()}

        def vface(key, j):
            surj, f = a.face(key, j)
            return (0,), surj, f

        return Bisimplicial(gens, lambda key, i: (_ for _ in ()).throw(SimplicialError("no horizontal faces")), vface)
    gens = {c: (c[0], 0) for c in a.cells()}

    def hface(key, i):
        surj, f = a.face(key, i)
        return surj, (0,), f

    return Bisimplicial(gens, hface, lambda key, j: (_ for _ in ()).throw(SimplicialError("no vertical faces")))


# ---------------------------------------------------------------------------
# simplicial maps and isomorphisms


def extend(target: FinSimpSet, mapping: dict[Cell, Simplex], simplex: Simplex) -> Simplex:
    """Image of a general simplex under a map given on nondegenerate cells."""
    theta, cell = simplex
    return target.act(mapping[cell], theta)


def map_violations(source: FinSimpSet, target: FinSimpSet, mapping: dict[Cell, Simplex]) -> list[tuple[Cell, int]]:
    """Pairs ``(cell, i)`` where ``f(d_i cell) != d_i f(cell)``."""
    bad = []
    for c in source.cells():
        if c not in mapping:
            bad.append((c, -1))
            continue
        img = mapping[c]
        if len(img[0]) != c[0] + 1:
            bad.append((c, -1))
            continue
        for i in range(c[0] + 1 if c[0] else 0):
            if extend(target, mapping, source.face(c, i)) != target.gface(img, i):
                bad.append((c, i))
    return bad


def is_isomorphism(source: FinSimpSet, target: FinSimpSet, mapping: dict[Cell, Simplex]) -> bool:
    if source.f_vector != target.f_vector:
        return False
    images = set()
    for c in source.cells():
        img = mapping.get(c)
        if img is None or img[0] != identity(c[0]):
            return False
        images.add(img[1])
    return len(images) == source.num_cells() and not map_violations(source, target, mapping)


def find_isomorphism(a: FinSimpSet, b: FinSimpSet) -> dict[Cell, Cell] | None:
    """Cell bijection respecting all faces, by backtracking (small inputs)."""
    if a.f_vector != b.f_vector:
        return None
    up_a, up_b = a.cofaces(), b.cofaces()

    def signature(s: FinSimpSet, up, c: Cell):
        profile = sorted(d[0] for d in up[c])
        faces = tuple(sorted((tuple(sorted(repeats(s.face(c, i)[0]))) for i in range(c[0] + 1)))) if c[0] else ()
        return (c[0], tuple(profile), faces)

    sig_b: dict = {}
    for c in b.cells():
        sig_b.setdefault(signature(b, up_b, c), []).append(c)
    order = list(a.cells())
    cand = {}
    for c in order:
        cand[c] = sig_b.get(signature(a, up_a, c), [])
        if not cand[c]:
            return None
    mapping: dict[Cell, Cell] = {}
    used: set[Cell] = set()

    def consistent(c: Cell, d: Cell) -> bool:
        if c[0] == 0:
            return True
        for i in range(c[0] + 1):
            sa, fa = a.face(c, i)
            sb, fb = b.face(d, i)
            if sa != sb or mapping.get(fa) != fb:
                return False
        return True

    def go(k: int) -> bool:
        if k == len(order):
            return True
        c = order[k]
        for d in cand[c]:
            if d in used or not consistent(c, d):
                continue
            mapping[c] = d
            used.add(d)
            if go(k + 1):
                return True
            del mapping[c]
            used.discard(d)
        return False

    return dict(mapping) if go(0) else None


def simplex_count(n: int, k: int) -> int:
    """Nondegenerate ``k``-simplices of ``Delta^n``."""
    return comb(n + 1, k + 1)
