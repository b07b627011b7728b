"""Stellar structure of the target stratification on ``BC``.

For a discrete acyclic category ``C`` every map here is a cell-level
simplicial map between finite simplicial sets:

* ``D_x = B(C|x)`` with boundary the nerve of the non-identity part of
  ``C|x``, and the cone isomorphism ``h_x`` onto ``boundary * {1_x}``;
* ``s_x: D_x -> BC`` (source functor) and ``t_x`` dually;
* ``b_{x,y}(u, -)``: post-composition with ``u: x -> y``.

The face category is re-extracted from the geometric data only (vertices of
``D_y`` over ``x`` and the action of ``b`` on them) and compared with ``C``.
"""

from __future__ import annotations

from collections.abc import Hashable
from dataclasses import dataclass, field

from .acyccat import AcycCat, CategoryError, classifying_space, ident, iso_check, mismatch_invariant
from .poset import order_complex
from .simpset import Cell, FinSimpSet, cone, identity, is_isomorphism, map_violations, standard_simplex
from .strat import StratSpace, check_conditions, face_poset


class StellarError(AssertionError):
    pass


# ---------------------------------------------------------------------------
# stratifications on BC


def _chain_objects(space: FinSimpSet, cell: Cell) -> tuple:
    key = space.key(cell)
    if space.meta.get("tier") == "enriched":
        return key[2][0]
    return key[0]


def unstable_stratification(c: AcycCat, space: FinSimpSet | None = None) -> StratSpace:
    """Label each cell of ``BC`` by the target of its chain."""
    b = classifying_space(c) if space is None else space
    labels = {cell: _chain_objects(b, cell)[-1] for cell in b.cells()}
    return StratSpace(b, c.reachability(), labels, name="unstable")


def stable_stratification(c: AcycCat, space: FinSimpSet | None = None) -> StratSpace:
    """Label each cell of ``BC`` by the source of its chain."""
    b = classifying_space(c) if space is None else space
    labels = {cell: _chain_objects(b, cell)[0] for cell in b.cells()}
    return StratSpace(b, c.reachability().opposite(), labels, name="stable")


# ---------------------------------------------------------------------------
# lower stars


@dataclass
class StellarCell:
    obj: Hashable
    comma: AcycCat
    dome: FinSimpSet
    boundary: FinSimpSet
    interior: set
    cone: FinSimpSet
    h_map: dict
    s_map: dict

    @property
    def boundary_cells(self) -> set:
        return set(self.dome.cells()) - self.interior


def lower_star(c: AcycCat, x: Hashable, bc: FinSimpSet | None = None) -> StellarCell:
    if c.is_poset_enriched():
        raise CategoryError("lower stars are built for the discrete tier")
    if x not in c.objects:
        raise CategoryError(f"unknown object {x!r}")
    bc = c.nondegenerate_nerve() if bc is None else bc
    comma = c.comma_below(x)
    dome = comma.nondegenerate_nerve()
    link = c.below_link(x)
    boundary = link.nondegenerate_nerve()
    cn = cone(boundary, apex="right")
    apex = cn.meta["apex"]
    one = ident(x)
    interior = set()
    h_map = {}
    s_map = {}
    for cell in dome.cells():
        objs, mors = dome.key(cell)
        if objs[-1] == one:
            interior.add(cell)
            if len(objs) == 1:
                h_map[cell] = (identity(0), apex)
            else:
                base = boundary.cell_of((objs[:-1], mors[:-1]))
                h_map[cell] = (identity(cell[0]), cn.cell_of(("J", base, (0, 0))))
        else:
            h_map[cell] = (identity(cell[0]), cn.cell_of(("L", boundary.cell_of((objs, mors)))))
        image = (tuple(c.src(w) for w in objs), tuple(h for h, _ in mors))
        s_map[cell] = (identity(cell[0]), bc.cell_of(image))
    return StellarCell(x, comma, dome, boundary, interior, cn, h_map, s_map)


def upper_star_map(c: AcycCat, x: Hashable, bc: FinSimpSet | None = None) -> tuple[FinSimpSet, dict]:
    """``D_x^op = B(x|C)`` and the target map ``t_x`` into ``BC``."""
    bc = c.nondegenerate_nerve() if bc is None else bc
    dome = c.comma_above(x).nondegenerate_nerve()
    t_map = {}
    for cell in dome.cells():
        objs, mors = dome.key(cell)
        image = (tuple(c.tgt(f) for f in objs), tuple(h for h, _ in mors))
        t_map[cell] = (identity(cell[0]), bc.cell_of(image))
    return dome, t_map


@dataclass
class Check:
    name: str
    ok: bool
    witness: object = None


@dataclass
class StellarReport:
    checks: list[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ch.ok for ch in self.checks)

    def add(self, name: str, ok: bool, witness: object = None) -> None:
        self.checks.append(Check(name, bool(ok), None if ok else witness))

    def failures(self) -> list[Check]:
        return [ch for ch in self.checks if not ch.ok]

    def extend(self, other: StellarReport, prefix: str = "") -> None:
        for ch in other.checks:
            self.checks.append(Check(prefix + ch.name, ch.ok, ch.witness))


def verify_cone(star: StellarCell) -> StellarReport:
    """``h_x`` is a face-respecting bijection ``D_x -> boundary * {1_x}``."""
    rep = StellarReport()
    viol = map_violations(star.dome, star.cone, star.h_map)
    rep.add("h_x simplicial", not viol, viol[:1])
    rep.add("h_x bijective", is_isomorphism(star.dome, star.cone, star.h_map), star.obj)
    regroup = [cell for cell in star.interior if cell[0] > 0]
    rep.add("h_x sends only the identity vertex to the apex", all(star.h_map[c][1] != star.cone.meta["apex"] for c in regroup))
    return rep


def verify_link_levels(c: AcycCat, x: Hashable, star: StellarCell | None = None) -> StellarReport:
    """Link ``k``-cells correspond to nondegenerate ``(k+1)``-chains of ``C`` ending at ``x``."""
    star = lower_star(c, x) if star is None else star
    rep = StellarReport()
    chains = {ch for ch in c.chains() if ch[0][-1] == x and len(ch[1]) >= 1}
    image = set()
    for cell in star.boundary.cells():
        objs, mors = star.boundary.key(cell)
        image.add((tuple(c.src(w) for w in objs) + (x,), tuple(h for h, _ in mors) + (objs[-1],)))
    rep.add("link levels", image == chains and len(image) == star.boundary.num_cells(), sorted(map(repr, image ^ chains))[:1])
    return rep


def verify_stratum_equals_star(c: AcycCat, x: Hashable, strat: StratSpace | None = None, star: StellarCell | None = None) -> StellarReport:
    strat = unstable_stratification(c) if strat is None else strat
    star = lower_star(c, x, strat.space) if star is None else star
    rep = StellarReport()
    viol = map_violations(star.dome, strat.space, star.s_map)
    rep.add("s_x simplicial", not viol, viol[:1])
    open_image = [star.s_map[cell][1] for cell in star.interior]
    rep.add("s_x injective on interior", len(set(open_image)) == len(open_image), x)
    stratum = strat.stratum(x)
    rep.add("s_x(interior) = open stratum", set(open_image) == stratum, sorted(set(open_image) ^ stratum)[:1])
    full = {star.s_map[cell][1] for cell in star.dome.cells()}
    closure = strat.closure(x)
    rep.add("s_x(D_x) = closure of stratum", full == closure, sorted(full ^ closure)[:1])
    last_dropped = all(
        strat.space.key(star.s_map[cell][1]) == (tuple(c.src(w) for w in star.dome.key(cell)[0]), tuple(h for h, _ in star.dome.key(cell)[1]))
        and star.dome.key(cell)[0][-1] == ident(x)
        for cell in star.interior
    )
    rep.add("interior cells are chains ending in the identity", last_dropped, x)
    return rep


def verify_partition(c: AcycCat, strat: StratSpace | None = None, stars: dict | None = None) -> StellarReport:
    """Every cell of ``BC`` is ``s_x`` of exactly one interior cell, ``x`` its target."""
    strat = unstable_stratification(c) if strat is None else strat
    stars = {x: lower_star(c, x, strat.space) for x in c.objects} if stars is None else stars
    hits: dict = {}
    for x, st in stars.items():
        for cell in st.interior:
            hits.setdefault(st.s_map[cell][1], []).append(x)
    bad = [cell for cell in strat.space.cells() if hits.get(cell, []) != [strat.labels[cell]]]
    rep = StellarReport()
    rep.add("interiors partition BC", not bad, bad[:1])
    return rep


# ---------------------------------------------------------------------------
# cylindrical structure


@dataclass
class CylStructure:
    """Parameter sets, ``b`` maps and composition ``c`` at the cell level.

    ``params[(x, y)]`` lists the parameters for ``x < y``; ``b[(x, y)][u]``
    maps cells of ``D_x`` to cells of ``D_y``; ``comp[(x, y, z)][(v, u)]``
    is the composite parameter in ``params[(x, z)]``.
    """

    strat: StratSpace
    stars: dict
    params: dict
    b: dict
    comp: dict
    vertex_param: dict = field(default_factory=dict)


def _post_compose(c: AcycCat, u: Hashable, key: tuple) -> tuple:
    objs, mors = key
    return tuple(c.compose(u, w) for w in objs), tuple((h, c.compose(u, g)) for h, g in mors)


def cylindrical_structure(c: AcycCat, strat: StratSpace | None = None) -> CylStructure:
    strat = unstable_stratification(c) if strat is None else strat
    stars = {x: lower_star(c, x, strat.space) for x in c.objects}
    params, bmaps, comp, vparam = {}, {}, {}, {}
    for x in c.objects:
        for y in c.objects:
            if x == y or not c.nonid_hom(x, y):
                continue
            dx, dy = stars[x].dome, stars[y].dome
            # parameters are read off D_y: its vertices lying over the vertex x
            over = [v for v in dy.cells(0) if strat.space.key(stars[y].s_map[v][1]) == ((x,), ())]
            params[(x, y)] = [dy.key(v)[0][0] for v in over]
            vparam[(x, y)] = {dy.key(v)[0][0]: v for v in over}
            bmaps[(x, y)] = {u: {cell: dy.cell_of(_post_compose(c, u, dx.key(cell))) for cell in dx.cells()} for u in params[(x, y)]}
    for (x, y), pxy in params.items():
        for (y2, z), pyz in params.items():
            if y2 != y:
                continue
            table = {}
            dy, dz = stars[y].dome, stars[z].dome
            for v in pyz:
                for u in pxy:
                    # c(v, u) is b_{y,z}(v, -) applied to the vertex u of D_y
                    target = bmaps[(y, z)][v][dy.cell_of(((u,), ()))]
                    table[(v, u)] = dz.key(target)[0][0]
            comp[(x, y, z)] = table
    return CylStructure(strat, stars, params, bmaps, comp, vparam)


def verify_cylindrical(cyl: CylStructure) -> StellarReport:
    rep = StellarReport()
    stars, params, b, comp = cyl.stars, cyl.params, cyl.b, cyl.comp
    for (x, y), ps in params.items():
        sx, sy = stars[x], stars[y]
        bad_simp = next((u for u in ps if map_violations(sx.dome, sy.dome, {k: (identity(k[0]), v) for k, v in b[(x, y)][u].items()})), None)
        rep.add(f"b[{x!r},{y!r}] simplicial", bad_simp is None, bad_simp)
        images = [b[(x, y)][u][cell] for u in ps for cell in sx.interior]
        rep.add(f"b[{x!r},{y!r}] injective on P x interior", len(set(images)) == len(images), (x, y))
        rep.add(f"b[{x!r},{y!r}] lands in boundary", not set(images) & sy.interior, (x, y))
        bad = next(
            ((u, cell) for u in ps for cell in sx.dome.cells() if sy.s_map[b[(x, y)][u][cell]][1] != sx.s_map[cell][1]),
            None,
        )
        rep.add(f"s_y o b = s_x on [{x!r},{y!r}]", bad is None, bad)
    for (x, y, z), table in comp.items():
        bad = None
        for (v, u), w in table.items():
            for cell in stars[x].dome.cells():
                if b[(y, z)][v][b[(x, y)][u][cell]] != b[(x, z)][w][cell]:
                    bad = (v, u, cell)
                    break
            if bad:
                break
        rep.add(f"b composes along c on [{x!r},{y!r},{z!r}]", bad is None, bad)
    bad = None
    for (x, y, z), t1 in comp.items():
        for (z2, w), pzw in params.items():
            if z2 != z:
                continue
            for (v, u) in t1:
                for p in pzw:
                    left = comp[(x, z, w)][(p, t1[(v, u)])]
                    right = comp[(x, y, w)][(comp[(y, z, w)][(p, v)], u)]
                    if left != right:
                        bad = (p, v, u)
    rep.add("c associative", bad is None, bad)
    for y, sy in stars.items():
        hits: dict = {}
        for cell in sy.interior:
            hits.setdefault(cell, []).append((y, None))
        for (x, y2), ps in params.items():
            if y2 != y:
                continue
            for u in ps:
                for cell in stars[x].interior:
                    hits.setdefault(b[(x, y)][u][cell], []).append((x, u))
        bad = [cell for cell in sy.dome.cells() if len(hits.get(cell, [])) != 1]
        rep.add(f"coverage of D_{y!r}", not bad, bad[:1])
    return rep


def parameter_components(cyl: CylStructure, x: Hashable, y: Hashable) -> list[set]:
    """Connected components of ``s_y^{-1}(e_x)`` inside ``D_y``."""
    st = cyl.stars[y]
    cells = {cell for cell in st.dome.cells() if cyl.strat.labels[st.s_map[cell][1]] == x}
    comps = []
    left = set(cells)
    while left:
        start = min(left)
        seen = {start}
        stack = [start]
        while stack:
            cur = stack.pop()
            for other in left:
                if other not in seen and (other in st.dome.closure([cur]) or cur in st.dome.closure([other])):
                    seen.add(other)
                    stack.append(other)
        comps.append(seen)
        left -= seen
    return comps


def extract_face_category(cyl: CylStructure) -> AcycCat:
    """Objects are strata; ``hom(x, y)`` is ``P_{x,y}``; composition is ``c``."""
    names = {}
    mors = {}
    for (x, y), ps in cyl.params.items():
        for p in ps:
            names[(x, y, p)] = ("P", x, y, p)
            mors[("P", x, y, p)] = (x, y)
    comp = {}
    for (x, y, z), table in cyl.comp.items():
        for (v, u), w in table.items():
            comp[(names[(y, z, v)], names[(x, y, u)])] = names[(x, z, w)]
    return AcycCat(cyl.strat.image, mors, comp, name="face category")


@dataclass
class RoundtripReport:
    isomorphism: dict | None
    stellar: StellarReport
    witness: dict | None = None

    @property
    def ok(self) -> bool:
        return self.isomorphism is not None and self.stellar.ok


def roundtrip(c: AcycCat, full: bool = True) -> RoundtripReport:
    """Face category of the unstable stratification on ``BC`` versus ``C``."""
    if c.is_poset_enriched():
        return roundtrip_enriched(c)
    strat = unstable_stratification(c)
    cyl = cylindrical_structure(c, strat)
    rep = StellarReport()
    if full:
        rep.extend(verify_cylindrical(cyl))
        rep.extend(verify_partition(c, strat, cyl.stars))
        for x, st in cyl.stars.items():
            rep.extend(verify_cone(st), f"{x!r}: ")
            rep.extend(verify_stratum_equals_star(c, x, strat, st), f"{x!r}: ")
    fc = extract_face_category(cyl)
    iso = iso_check(fc, c)
    return RoundtripReport(iso, rep, None if iso else mismatch_invariant(fc, c))


def roundtrip_enriched(c: AcycCat) -> RoundtripReport:
    """Poset-enriched tier: strata are the objects, and each hom of ``BC`` is the nerve of its hom poset."""
    rep = StellarReport()
    enr = c.enriched()
    space = enr.classifying_space()
    strat = unstable_stratification(c, space)
    rep.add("one stratum per object", len(strat.image) == len(c.objects), strat.image)
    cond = check_conditions(strat)
    rep.add("unstable stratification is a stratification", cond.stratification, cond.failures()[:1])
    for (x, y), hom in enr.homs.items():
        nerve = order_complex(c.hom_poset(x, y))
        rep.add(f"hom {x!r}->{y!r} is a poset nerve", hom.f_vector == nerve.f_vector and hom.structure() == nerve.structure(), (x, y))
    fp = face_poset(strat)
    iso = None
    from .poset import find_poset_isomorphism

    objmap = find_poset_isomorphism(fp, c.reachability())
    if objmap is not None:
        iso = {"objects": objmap, "morphisms": {}}
    return RoundtripReport(iso, rep)


# ---------------------------------------------------------------------------
# simplicial complexes: the trivial cylindrical structure


def simplicial_cylindrical_structure(x: FinSimpSet) -> tuple[AcycCat, StellarReport]:
    """Face category of a simplicially stratified, vertex-determined complex.

    ``D_s`` is a standard simplex mapped onto the closed cell ``s``; the
    parameter space for ``t`` a face of ``s`` is a point and ``b`` is the
    face inclusion.
    """
    rep = StellarReport()
    if not x.vertex_determined():
        raise StellarError("complex must be vertex-determined")
    verts = {c: x.vertices(c) for c in x.cells()}
    by_verts = {v: c for c, v in verts.items()}
    faces = {s: {t for t in x.closure([s]) if t != s} for s in x.cells()}
    domes = {s: standard_simplex(s[0]) for s in x.cells()}

    def phi(s, key):
        return by_verts[tuple(verts[s][i] for i in key)]

    def b(t, s, key):
        pos = [verts[s].index(v) for v in verts[t]]
        return tuple(pos[i] for i in key)

    for s in x.cells():
        d = domes[s]
        rep.add(f"phi_{s} image is the closed cell", {phi(s, d.key(c)) for c in d.cells()} == faces[s] | {s}, s)
        covered = []
        for t in faces[s] | {s}:
            dt = domes[t]
            inner = [c for c in dt.cells() if c[0] == t[0]]
            covered += [b(t, s, dt.key(c)) for c in inner]
            bad = next((c for c in dt.cells() if phi(s, b(t, s, dt.key(c))) != phi(t, dt.key(c))), None)
            rep.add(f"phi_s o b = phi_t for {t} < {s}", bad is None, bad)
        rep.add(f"coverage of D_{s}", sorted(covered) == sorted(d.key(c) for c in d.cells()), s)
    mors = {("P", t, s): (t, s) for s in x.cells() for t in faces[s]}
    comp = {}
    for s in x.cells():
        for t in faces[s]:
            for r in faces[t]:
                comp[(("P", t, s), ("P", r, t))] = ("P", r, s)
    return AcycCat(list(x.cells()), mors, comp, name="face category"), rep


def salvetti_check(x: FinSimpSet) -> StellarReport:
    """``B`` of the face category matches the barycentric subdivision cell for cell."""
    fc, rep = simplicial_cylindrical_structure(x)
    bfc = fc.nondegenerate_nerve()
    from .poset import poset_from_complex_faces

    sd = order_complex(poset_from_complex_faces(x))
    rep.add("f-vector of B(face category) equals barycentric subdivision", bfc.f_vector == sd.f_vector, (bfc.f_vector, sd.f_vector))
    return rep


def stellar_report(c: AcycCat, x: Hashable) -> dict:
    """Summary for one object: sizes, cone and stratum checks."""
    strat = unstable_stratification(c)
    st = lower_star(c, x, strat.space)
    rep = StellarReport()
    rep.extend(verify_cone(st))
    rep.extend(verify_stratum_equals_star(c, x, strat, st))
    rep.extend(verify_link_levels(c, x, st))
    return {
        "object": x,
        "dome_f_vector": st.dome.f_vector,
        "boundary_f_vector": st.boundary.f_vector,
        "dome_euler": st.dome.euler_characteristic(),
        "interior_cells": len(st.interior),
        "checks": [(ch.name, ch.ok) for ch in rep.checks],
        "ok": rep.ok,
    }
