"""Exit simplices, conical charts and inner horn filling on ``BC``.

A *fragment simplex* of a simplicial set ``X`` is the affine singular
simplex ``Delta^n -> |X|`` sending vertex ``i`` to vertex ``g(i)`` of a
nondegenerate cell ``z``.  It is stored canonically as ``(z', g')`` where
``z'`` is the cell carrying the face of ``z`` spanned by the image of
``g`` and ``g'`` is surjective onto its vertices.
"""

from __future__ import annotations

from collections.abc import Hashable, Iterator, Sequence
from dataclasses import dataclass, field
from itertools import combinations, product as cartesian

from .acyccat import AcycCat, CategoryError, ident
from .simpset import Cell, FinSimpSet, cone, identity, is_isomorphism, join, map_violations
from .stellar import StellarCell, StellarReport, lower_star, unstable_stratification, upper_star_map
from .strat import StratSpace

Fragment = tuple[Cell, tuple[int, ...]]


# ---------------------------------------------------------------------------
# fragment simplices


def canonical(space: FinSimpSet, cell: Cell, g: Sequence[int]) -> Fragment:
    """Reduce ``(cell, g)`` so that ``g`` is surjective onto the carrying cell."""
    if any(not 0 <= v <= cell[0] for v in g):
        raise ValueError(f"vertex map {tuple(g)} does not land in a {cell[0]}-cell")
    mono = tuple(sorted(set(g)))
    theta, carrier = space.act((identity(cell[0]), cell), mono)
    pos = {v: k for k, v in enumerate(mono)}
    return carrier, tuple(theta[pos[v]] for v in g)


def fragment_face(space: FinSimpSet, frag: Fragment, i: int) -> Fragment:
    cell, g = frag
    return canonical(space, cell, g[:i] + g[i + 1 :])


def fragment_degeneracy(space: FinSimpSet, frag: Fragment, j: int) -> Fragment:
    cell, g = frag
    return canonical(space, cell, g[: j + 1] + g[j:])


def fragment_vertices(space: FinSimpSet, frag: Fragment) -> tuple[int, ...]:
    verts = space.vertices(frag[0])
    return tuple(verts[v] for v in frag[1])


def is_exit_simplex(x: StratSpace, frag: Fragment) -> bool:
    """Monotone vertex labels, and each open face labelled by its last vertex."""
    space = x.space
    cell, g = frag
    if cell not in x.labels:
        raise ValueError(f"{cell} is not a cell of the space")
    verts = space.vertices(cell)
    lab = [x.labels[(0, verts[v])] for v in g]
    if any(not x.poset.leq(a, b) for a, b in zip(lab, lab[1:])):
        return False
    n = len(g) - 1
    for r in range(2, n + 2):
        for s in combinations(range(n + 1), r):
            carrier, _ = canonical(space, cell, [g[i] for i in s])
            if x.labels[carrier] != lab[s[-1]]:
                return False
    return True


def fragments(space: FinSimpSet, n: int) -> Iterator[Fragment]:
    """All canonical fragment ``n``-simplices, ordered by (cell, vertex map)."""
    for cell in sorted(space.cells()):
        if cell[0] > n:
            continue
        for g in cartesian(range(cell[0] + 1), repeat=n + 1):
            if len(set(g)) == cell[0] + 1 and canonical(space, cell, g) == (cell, g):
                yield cell, g


def exit_fragments(x: StratSpace, n: int) -> list[Fragment]:
    return [f for f in fragments(x.space, n) if is_exit_simplex(x, f)]


# ---------------------------------------------------------------------------
# horns


@dataclass
class Horn:
    n: int
    k: int
    faces: dict  # i -> Fragment, i != k


def horn_compatible(space: FinSimpSet, horn: Horn) -> bool:
    idx = sorted(horn.faces)
    for a, i in enumerate(idx):
        for j in idx[a + 1 :]:
            if fragment_face(space, horn.faces[j], i) != fragment_face(space, horn.faces[i], j - 1):
                return False
    return True


def horn_fill(x: StratSpace, horn: Horn) -> Fragment | None:
    """First exit ``n``-simplex (in canonical order) whose faces match the horn."""
    if not 0 < horn.k < horn.n or set(horn.faces) != set(range(horn.n + 1)) - {horn.k}:
        raise ValueError("expected an inner horn with every face but the k-th")
    space = x.space
    for f in horn.faces.values():
        if len(f[1]) != horn.n:
            raise ValueError("horn faces have the wrong dimension")
        if not is_exit_simplex(x, f):
            raise ValueError(f"horn face {f} is not an exit simplex")
    if not horn_compatible(space, horn):
        raise ValueError("horn faces do not agree on common faces")
    want_verts = {}
    for i, f in horn.faces.items():
        vs = fragment_vertices(space, f)
        for pos, v in enumerate(vs):
            want_verts[pos if pos < i else pos + 1] = v
    for cand in fragments(space, horn.n):
        if fragment_vertices(space, cand) != tuple(want_verts[p] for p in range(horn.n + 1)):
            continue
        if all(fragment_face(space, cand, i) == f for i, f in horn.faces.items()) and is_exit_simplex(x, cand):
            return cand
    return None


def inner_horns(x: StratSpace, n: int) -> Iterator[Horn]:
    """Every inner ``n``-horn built from exit simplices of the fragment."""
    space = x.space
    pool = exit_fragments(x, n - 1)
    for k in range(1, n):
        idx = [i for i in range(n + 1) if i != k]

        def grow(pos: int, chosen: dict):
            if pos == len(idx):
                yield Horn(n, k, dict(chosen))
                return
            i = idx[pos]
            for f in pool:
                ok = True
                for j, h in chosen.items():
                    if fragment_face(space, f, j) != fragment_face(space, h, i - 1):
                        ok = False
                        break
                if ok:
                    chosen[i] = f
                    yield from grow(pos + 1, chosen)
                    del chosen[i]

        yield from grow(0, {})


@dataclass
class HornReport:
    total: int = 0
    filled: int = 0
    unfilled: list = field(default_factory=list)
    by_dim: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.total == self.filled


def exhaustive_horns(x: StratSpace, max_dim: int = 3) -> HornReport:
    rep = HornReport()
    for n in range(2, max_dim + 1):
        count = 0
        for horn in inner_horns(x, n):
            count += 1
            rep.total += 1
            if horn_fill(x, horn) is not None:
                rep.filled += 1
            else:
                rep.unfilled.append(horn)
        rep.by_dim[n] = count
    return rep


# ---------------------------------------------------------------------------
# conical charts


@dataclass
class ConicalChart:
    obj: Hashable
    star: StellarCell
    op_dome: FinSimpSet
    t_map: dict
    op_boundary: FinSimpSet
    op_cone: FinSimpSet
    h_op: dict
    joined: FinSimpSet
    n_map: dict
    open_cells: set
    unit_vertex: Cell
    bc: FinSimpSet

    def c_map(self, sigma: Cell, rho: Cell) -> Cell:
        """``c_x(sigma, rho) = n_x(j_x(sigma, h_x^op(rho)))`` on cells."""
        return self.n_map[self.j_map(sigma, self.h_op[rho][1])][1]

    def j_map(self, sigma: Cell, kappa: Cell) -> Cell:
        key = self.op_cone.key(kappa)
        if key[0] == "L":
            return self.joined.cell_of(("L", sigma))
        if key[0] == "J":
            return self.joined.cell_of(("J", sigma, key[2]))
        return self.joined.cell_of(("R", key[1]))

    @property
    def op_interior(self) -> set:
        one = ident(self.obj)
        return {c for c in self.op_dome.cells() if self.op_dome.key(c)[0][0] == one}

    def op_unit(self) -> Cell:
        return self.op_dome.cell_of(((ident(self.obj),), ()))

    def open_image(self) -> set:
        return {self.n_map[c][1] for c in self.open_cells}


def build_chart(c: AcycCat, x: Hashable, bc: FinSimpSet | None = None) -> ConicalChart:
    if c.is_poset_enriched():
        raise CategoryError("charts are built for the discrete tier")
    bc = c.nondegenerate_nerve() if bc is None else bc
    star = lower_star(c, x, bc)
    op_dome, t_map = upper_star_map(c, x, bc)
    op_boundary = c.above_link(x).nondegenerate_nerve()
    op_cone = cone(op_boundary, apex="left")
    apex = op_cone.meta["apex"]
    one = ident(x)
    h_op = {}
    for cell in op_dome.cells():
        objs, mors = op_dome.key(cell)
        if objs[0] == one:
            if len(objs) == 1:
                h_op[cell] = (identity(0), apex)
            else:
                rest = op_boundary.cell_of((objs[1:], mors[1:]))
                h_op[cell] = (identity(cell[0]), op_cone.cell_of(("J", (0, 0), rest)))
        else:
            h_op[cell] = (identity(cell[0]), op_cone.cell_of(("R", op_boundary.cell_of((objs, mors)))))
    joined = join(star.dome, op_boundary)
    n_map = {}
    open_cells = set()
    for cell in joined.cells():
        key = joined.key(cell)
        if key[0] == "L":
            image = star.s_map[key[1]][1]
            if key[1] in star.interior:
                open_cells.add(cell)
        elif key[0] == "R":
            objs, mors = op_boundary.key(key[1])
            image = bc.cell_of((tuple(c.tgt(f) for f in objs), tuple(h for h, _ in mors)))
        else:
            s_objs, s_mors = star.dome.key(key[1])
            t_objs, t_mors = op_boundary.key(key[2])
            objs = tuple(c.src(w) for w in s_objs) + tuple(c.tgt(f) for f in t_objs)
            mors = tuple(h for h, _ in s_mors) + (c.compose(t_objs[0], s_objs[-1]),) + tuple(h for h, _ in t_mors)
            image = bc.cell_of((objs, mors))
            if key[1] in star.interior:
                open_cells.add(cell)
        n_map[cell] = (identity(cell[0]), image)
    unit = star.dome.cell_of(((one,), ()))
    return ConicalChart(x, star, op_dome, t_map, op_boundary, op_cone, h_op, joined, n_map, open_cells, unit, bc)


def vertex_star(bc: FinSimpSet, x: Hashable) -> set:
    """Cells whose chain passes through the object ``x``."""
    return {cell for cell in bc.cells() if x in bc.key(cell)[0]}


def closed_star(bc: FinSimpSet, x: Hashable) -> set:
    return bc.closure(vertex_star(bc, x))


def verify_chart(chart: ConicalChart) -> StellarReport:
    rep = StellarReport()
    bc, x = chart.bc, chart.obj
    rep.add("h_x^op bijective", is_isomorphism(chart.op_dome, chart.op_cone, chart.h_op), x)
    viol = map_violations(chart.joined, bc, chart.n_map)
    rep.add("n_x simplicial", not viol, viol[:1])
    star = vertex_star(bc, x)
    opened = [chart.n_map[c][1] for c in chart.open_cells]
    rep.add("n_x injective on the open part", len(set(opened)) == len(opened), x)
    rep.add("n_x(open part) = vertex star", set(opened) == star, sorted(set(opened) ^ star)[:1])
    full = {img for _, img in chart.n_map.values()}
    rep.add("n_x(all cells) = closed star", full == closed_star(bc, x), x)
    bad = next((s for s in chart.star.dome.cells() if chart.c_map(s, chart.op_unit()) != chart.star.s_map[s][1]), None)
    rep.add("c_x(-, 1_x) = s_x", bad is None, bad)
    bad = next((r for r in chart.op_dome.cells() if chart.c_map(chart.unit_vertex, r) != chart.t_map[r][1]), None)
    rep.add("c_x(1_x, -) = t_x", bad is None, bad)
    pairs = [(s, r) for s in chart.star.interior for r in chart.op_interior]
    images = {chart.j_map(s, chart.h_op[r][1]) for s, r in pairs}
    rep.add("j_x o (1 x h_x^op) bijective onto the open join", len(images) == len(pairs) and images == chart.open_cells, x)
    cimg = [chart.c_map(s, r) for s, r in pairs]
    rep.add("c_x injective on interior pairs onto vertex star", len(set(cimg)) == len(cimg) and set(cimg) == star, x)
    return rep


@dataclass
class CoverReport:
    charts: dict
    covered: set
    missing: list
    report: StellarReport

    @property
    def ok(self) -> bool:
        return not self.missing and self.report.ok


def cover(c: AcycCat, verify: bool = True) -> CoverReport:
    bc = c.nondegenerate_nerve()
    charts = {x: build_chart(c, x, bc) for x in c.objects}
    rep = StellarReport()
    covered: set = set()
    for x, ch in charts.items():
        if verify:
            rep.extend(verify_chart(ch), f"{x!r}: ")
        covered |= ch.open_image()
    missing = [cell for cell in bc.cells() if cell not in covered]
    rep.add("charts cover BC", not missing, missing[:1])
    return CoverReport(charts, covered, missing, rep)


def chain_fragment(x: StratSpace, chain_key: tuple) -> Fragment:
    """The characteristic simplex of a chain cell of ``BC``."""
    cell = x.space.cell_of(chain_key)
    return cell, identity(cell[0])


def unstable(c: AcycCat) -> StratSpace:
    return unstable_stratification(c)
