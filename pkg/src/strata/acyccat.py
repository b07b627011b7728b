"""Finite acyclic categories, their nerves and classifying spaces.

Two tiers share most of the code:

* the discrete tier, where ``C(x, y)`` is a finite set of named morphisms
  (optionally partially ordered, giving a poset-enriched category);
* the enriched tier (:class:`EnrichedCat`), where ``C(x, y)`` is a finite
  vertex-determined simplicial set and composition is given on vertices.

Identities are implicit and written ``("id", x)``.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Hashable, Iterable, Sequence
from dataclasses import dataclass, field
from itertools import combinations, product as cartesian

from .poset import FinPoset, order_complex
from .simpset import (
    Bisimplicial,
    FinSimpSet,
    SimplicialError,
    build,
    diagonal,
    identity,
    split_common,
    _shuffle_pairs,
    surj_from_repeats,
)


class CategoryError(ValueError):
    pass


def ident(x: Hashable) -> tuple:
    return ("id", x)


def is_ident(m: Hashable) -> bool:
    return isinstance(m, tuple) and len(m) == 2 and m[0] == "id"


@dataclass
class AxiomVerdict:
    name: str
    ok: bool
    witness: object = None


@dataclass
class CatReport:
    verdicts: list[AxiomVerdict] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    def verdict(self, name: str) -> AxiomVerdict:
        return next(v for v in self.verdicts if v.name == name)

    def failures(self) -> list[AxiomVerdict]:
        return [v for v in self.verdicts if not v.ok]


class AcycCat:
    """Finite category with named morphisms and a composition table.

    ``morphisms`` maps each non-identity morphism to ``(source, target)``;
    ``composition`` maps ``(g, f)`` to ``g o f`` for every composable pair of
    non-identities.  ``hom_order`` optionally lists relations ``a < b``
    inside hom sets, making the category poset-enriched; composition must
    then be monotone in each variable.

    The constructor only checks shapes; :meth:`validate` checks the axioms.
    """

    def __init__(
        self,
        objects: Iterable[Hashable],
        morphisms: dict[Hashable, tuple[Hashable, Hashable]],
        composition: dict[tuple[Hashable, Hashable], Hashable] | None = None,
        hom_order: Iterable[tuple[Hashable, Hashable]] | None = None,
        name: str = "",
    ):
        self.objects = tuple(objects)
        if len(set(self.objects)) != len(self.objects):
            raise CategoryError("duplicate objects")
        self._objset = set(self.objects)
        self.morphisms = dict(morphisms)
        for m, (s, t) in self.morphisms.items():
            if is_ident(m):
                raise CategoryError(f"morphism name {m!r} is reserved for identities")
            if s not in self._objset or t not in self._objset:
                raise CategoryError(f"morphism {m!r} has an unknown endpoint")
        self.composition = dict(composition or {})
        for (g, f), h in self.composition.items():
            for m in (g, f, h):
                if m not in self.morphisms and not is_ident(m):
                    raise CategoryError(f"composition table mentions unknown morphism {m!r}")
        self.hom_order = None if hom_order is None else tuple(hom_order)
        self.name = name
        self._homs: dict[tuple, list] = {}
        for m, (s, t) in self.morphisms.items():
            self._homs.setdefault((s, t), []).append(m)

    # -- basic structure ------------------------------------------------

    def src(self, m: Hashable) -> Hashable:
        return m[1] if is_ident(m) else self.morphisms[m][0]

    def tgt(self, m: Hashable) -> Hashable:
        return m[1] if is_ident(m) else self.morphisms[m][1]

    def hom(self, x: Hashable, y: Hashable) -> list:
        """All morphisms ``x -> y``, identity included when ``x == y``."""
        out = list(self._homs.get((x, y), []))
        return [ident(x)] + out if x == y else out

    def nonid_hom(self, x: Hashable, y: Hashable) -> list:
        return list(self._homs.get((x, y), []))

    def compose(self, g: Hashable, f: Hashable) -> Hashable:
        """``g o f`` (``f`` first)."""
        if self.tgt(f) != self.src(g):
            raise CategoryError(f"{g!r} o {f!r} is not composable")
        if is_ident(f):
            return g
        if is_ident(g):
            return f
        try:
            return self.composition[(g, f)]
        except KeyError:
            raise CategoryError(f"composition {g!r} o {f!r} is missing") from None

    def is_poset_enriched(self) -> bool:
        return self.hom_order is not None

    def hom_poset(self, x: Hashable, y: Hashable) -> FinPoset:
        elems = self.hom(x, y)
        keep = set(elems)
        rel = [(a, b) for a, b in (self.hom_order or ()) if a in keep and b in keep]
        return FinPoset(elems, rel)

    def num_morphisms(self) -> int:
        return len(self.morphisms)

    def hom_table(self) -> dict[tuple, int]:
        return {(x, y): len(self.nonid_hom(x, y)) for x in self.objects for y in self.objects if x != y}

    def reachability(self) -> FinPoset:
        """``P(C)``: ``x <= y`` iff ``C(x, y)`` is nonempty."""
        return FinPoset(self.objects, [(s, t) for s, t in self.morphisms.values()])

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"AcycCat{label}({len(self.objects)} objects, {len(self.morphisms)} morphisms)"

    # -- validation -------------------------------------------------------

    def validate(self) -> CatReport:
        rep = CatReport()
        inverse = next(
            ((x, y) for x in self.objects for y in self.objects if x != y and self.nonid_hom(x, y) and self.nonid_hom(y, x)),
            None,
        )
        rep.verdicts.append(AxiomVerdict("no_opposite_homs", inverse is None, inverse))
        endo = next((m for m, (s, t) in self.morphisms.items() if s == t), None)
        rep.verdicts.append(AxiomVerdict("identity_only_endos", endo is None, endo))

        composable = [(g, f) for f in self.morphisms for g in self.morphisms if self.morphisms[f][1] == self.morphisms[g][0]]
        missing = next(((g, f) for g, f in composable if (g, f) not in self.composition), None)
        typed = None
        for (g, f), h in self.composition.items():
            if (g, f) not in composable and not (is_ident(g) or is_ident(f)):
                typed = (g, f)
                break
            if self.src(h) != self.src(f) or self.tgt(h) != self.tgt(g):
                typed = (g, f)
                break
        rep.verdicts.append(AxiomVerdict("composition_total", missing is None and typed is None, missing or typed))

        bad_unit = None
        for (g, f), h in self.composition.items():
            if is_ident(g) and h != f or is_ident(f) and h != g:
                bad_unit = (g, f)
                break
        rep.verdicts.append(AxiomVerdict("unital", bad_unit is None, bad_unit))

        bad_assoc = None
        if missing is None and typed is None:
            for h in self.morphisms:
                for g in self.morphisms:
                    if self.morphisms[g][1] != self.morphisms[h][0]:
                        continue
                    for f in self.morphisms:
                        if self.morphisms[f][1] != self.morphisms[g][0]:
                            continue
                        if self.compose(h, self.compose(g, f)) != self.compose(self.compose(h, g), f):
                            bad_assoc = (h, g, f)
                            break
                    if bad_assoc:
                        break
                if bad_assoc:
                    break
        rep.verdicts.append(AxiomVerdict("associative", bad_assoc is None, bad_assoc))

        try:
            self.reachability()
            cyc = None
        except ValueError as exc:
            cyc = str(exc)
        rep.verdicts.append(AxiomVerdict("reachability_is_partial_order", cyc is None, cyc))
        rep.verdicts.append(AxiomVerdict("locally_finite", True))

        if self.hom_order is not None:
            rep.verdicts.append(self._check_order())
        return rep

    def _check_order(self) -> AxiomVerdict:
        for a, b in self.hom_order:
            if a not in self.morphisms and not is_ident(a) or b not in self.morphisms and not is_ident(b):
                return AxiomVerdict("monotone_composition", False, (a, b))
            if (self.src(a), self.tgt(a)) != (self.src(b), self.tgt(b)):
                return AxiomVerdict("monotone_composition", False, (a, b))
        posets = {}
        try:
            for x in self.objects:
                for y in self.objects:
                    if self.nonid_hom(x, y):
                        posets[(x, y)] = self.hom_poset(x, y)
        except ValueError as exc:
            return AxiomVerdict("monotone_composition", False, str(exc))
        for (x, y), pxy in posets.items():
            for (y2, z), pyz in posets.items():
                if y2 != y:
                    continue
                pxz = posets[(x, z)]
                for f1, f2 in cartesian(pxy.elements, repeat=2):
                    for g1, g2 in cartesian(pyz.elements, repeat=2):
                        if pxy.leq(f1, f2) and pyz.leq(g1, g2):
                            if not pxz.leq(self.compose(g1, f1), self.compose(g2, f2)):
                                return AxiomVerdict("monotone_composition", False, (g1, f1, g2, f2))
        return AxiomVerdict("monotone_composition", True)

    def require_valid(self) -> None:
        rep = self.validate()
        if not rep.ok:
            bad = rep.failures()[0]
            raise CategoryError(f"category fails {bad.name}: witness {bad.witness!r}")

    # -- derived categories --------------------------------------------

    def opposite(self) -> AcycCat:
        mors = {m: (t, s) for m, (s, t) in self.morphisms.items()}
        comp = {(f, g): h for (g, f), h in self.composition.items()}
        return AcycCat(self.objects, mors, comp, self.hom_order, name=f"{self.name}^op" if self.name else "")

    def full_subcategory(self, objects: Iterable[Hashable]) -> AcycCat:
        keep = set(objects)
        objs = [x for x in self.objects if x in keep]
        mors = {m: st for m, st in self.morphisms.items() if st[0] in keep and st[1] in keep}
        comp = {k: h for k, h in self.composition.items() if k[0] in mors and k[1] in mors}
        order = None if self.hom_order is None else [(a, b) for a, b in self.hom_order if a in mors and b in mors]
        return AcycCat(objs, mors, comp, order)

    def comma_below(self, x: Hashable) -> AcycCat:
        """``C|x``: objects are morphisms into ``x``; a morphism ``f -> g`` is ``h`` with ``g o h = f``.

        Morphism keys are pairs ``(h, g)``.
        """
        self._require_object(x)
        objs = [f for w in self.objects for f in self.hom(w, x)]
        mors = {}
        for g in objs:
            for w in self.objects:
                for h in self.nonid_hom(w, self.src(g)):
                    mors[(h, g)] = (self.compose(g, h), g)
        comp = {}
        for (h2, g2), (g1, _) in mors.items():
            for (h1, g1b), _st in mors.items():
                if g1b == g1:
                    comp[((h2, g2), (h1, g1))] = (self.compose(h2, h1), g2)
        return AcycCat(objs, mors, comp)

    def comma_above(self, x: Hashable) -> AcycCat:
        """``x|C``: objects are morphisms out of ``x``; a morphism ``f -> g`` is ``h`` with ``h o f = g``.

        Morphism keys are pairs ``(h, f)``.
        """
        self._require_object(x)
        objs = [f for w in self.objects for f in self.hom(x, w)]
        mors = {}
        for f in objs:
            for w in self.objects:
                for h in self.nonid_hom(self.tgt(f), w):
                    mors[(h, f)] = (f, self.compose(h, f))
        comp = {}
        for (h2, f2), (src2, _) in mors.items():
            for (h1, f1), (_, tgt1) in mors.items():
                if tgt1 == src2:
                    comp[((h2, f2), (h1, f1))] = (self.compose(h2, h1), f1)
        return AcycCat(objs, mors, comp)

    def below_link(self, x: Hashable) -> AcycCat:
        """Full subcategory of ``C|x`` on the non-identity objects."""
        cb = self.comma_below(x)
        return cb.full_subcategory([f for f in cb.objects if not is_ident(f)])

    def above_link(self, x: Hashable) -> AcycCat:
        ca = self.comma_above(x)
        return ca.full_subcategory([f for f in ca.objects if not is_ident(f)])

    def _require_object(self, x: Hashable) -> None:
        if x not in self._objset:
            raise CategoryError(f"unknown object {x!r}")

    # -- chains and nerves ----------------------------------------------

    def chains(self) -> list[tuple[tuple, tuple]]:
        """Nondegenerate chains ``(objects, morphisms)``, grouped by length."""
        order = self.reachability().linear_extension()
        out: list = [((x,), ()) for x in order]
        frontier = list(out)
        while frontier:
            nxt = []
            for objs, mors in frontier:
                last = objs[-1]
                for y in order:
                    for m in self.nonid_hom(last, y):
                        nxt.append((objs + (y,), mors + (m,)))
            out.extend(nxt)
            frontier = nxt
        return out

    def chain_face(self, chain: tuple, i: int) -> tuple:
        objs, mors = chain
        k = len(mors)
        if i == 0:
            return objs[1:], mors[1:]
        if i == k:
            return objs[:-1], mors[:-1]
        return objs[:i] + objs[i + 1 :], mors[: i - 1] + (self.compose(mors[i], mors[i - 1]),) + mors[i + 1 :]

    def nondegenerate_nerve(self) -> FinSimpSet:
        """Discrete-tier nerve; cells keyed by chains ``(objects, morphisms)``."""
        by_len: dict[int, list] = {}
        for ch in self.chains():
            by_len.setdefault(len(ch[1]), []).append(ch)
        levels = [by_len.get(k, []) for k in range(max(by_len, default=-1) + 1)]
        out = build(levels, lambda ch, i: (identity(len(ch[1]) - 1), self.chain_face(ch, i)))
        out.meta["tier"] = "discrete"
        return out

    def enriched(self) -> EnrichedCat:
        """View as a simplicially enriched category with homs the order complexes of the hom posets."""
        homs = {}
        for x in self.objects:
            for y in self.objects:
                if x != y and self.nonid_hom(x, y):
                    homs[(x, y)] = order_complex(self.hom_poset(x, y))

        def vcomp(g, f):
            return (self.compose(g[0], f[0]),)

        return EnrichedCat(self.objects, homs, vcomp)


# ---------------------------------------------------------------------------
# enriched tier


class EnrichedCat:
    """Acyclic category enriched in finite vertex-determined simplicial sets.

    ``homs[(x, y)]`` is the hom simplicial set for ``x != y`` (absent means
    empty); composition is determined by ``vertex_compose(g_key, f_key)``
    on vertex keys and extended simplexwise.
    """

    def __init__(
        self,
        objects: Iterable[Hashable],
        homs: dict[tuple, FinSimpSet],
        vertex_compose: Callable[[Hashable, Hashable], Hashable] | None = None,
    ):
        self.objects = tuple(objects)
        self.homs = {k: v for k, v in homs.items() if not v.is_empty()}
        self.vertex_compose = vertex_compose

    def hom(self, x, y) -> FinSimpSet | None:
        return self.homs.get((x, y))

    def reachability(self) -> FinPoset:
        return FinPoset(self.objects, list(self.homs))

    def compose_simplices(self, x, y, z, g, f):
        """Compose general ``q``-simplices ``g`` of ``C(y, z)`` and ``f`` of ``C(x, y)``."""
        hg, hf, hz = self.homs[(y, z)], self.homs[(x, y)], self.homs[(x, z)]
        gv = [hg.key((0, v)) for v in hg.gvertices(g)]
        fv = [hf.key((0, v)) for v in hf.gvertices(f)]
        if self.vertex_compose is None:
            raise CategoryError("composition is not defined")
        verts = [hz.cell_of(self.vertex_compose(a, b))[1] for a, b in zip(gv, fv)]
        return hz.simplex_by_vertices(verts)

    def validate(self) -> CatReport:
        rep = CatReport()
        try:
            p = self.reachability()
            err = None
        except ValueError as exc:
            p, err = None, str(exc)
        opp = next(((x, y) for (x, y) in self.homs if (y, x) in self.homs), None)
        rep.verdicts.append(AxiomVerdict("no_opposite_homs", opp is None and err is None, opp or err))
        endo = next(((x, y) for (x, y) in self.homs if x == y), None)
        rep.verdicts.append(AxiomVerdict("identity_only_endos", endo is None, endo))
        vd = next((k for k, h in self.homs.items() if not h.vertex_determined()), None)
        rep.verdicts.append(AxiomVerdict("vertex_determined_homs", vd is None, vd))
        bad = None
        if p is not None and vd is None:
            bad = self._check_composition()
        rep.verdicts.append(AxiomVerdict("composition_simplicial", bad is None, bad))
        return rep

    def _check_composition(self):
        for (x, y), hxy in self.homs.items():
            for (y2, z), hyz in self.homs.items():
                if y2 != y:
                    continue
                if (x, z) not in self.homs:
                    return ("missing hom", x, z)
                for cg in hyz.cells():
                    for cf in hxy.cells():
                        for n, r1, r2 in _shuffle_pairs(cg[0], cf[0]):
                            g = (surj_from_repeats(n, r1), cg)
                            f = (surj_from_repeats(n, r2), cf)
                            try:
                                self.compose_simplices(x, y, z, g, f)
                            except (SimplicialError, KeyError, CategoryError):
                                return ("composite not a simplex", x, y, z, cg, cf)
        objs = self.objects
        for w, x, y, z in cartesian(objs, repeat=4):
            if (w, x) in self.homs and (x, y) in self.homs and (y, z) in self.homs:
                for a in self.homs[(w, x)].cells(0):
                    for b in self.homs[(x, y)].cells(0):
                        for c in self.homs[(y, z)].cells(0):
                            ka, kb, kc = (self.homs[k].key(v) for k, v in (((w, x), a), ((x, y), b), ((y, z), c)))
                            left = self.vertex_compose(kc, self.vertex_compose(kb, ka))
                            right = self.vertex_compose(self.vertex_compose(kc, kb), ka)
                            if left != right:
                                return ("not associative", ka, kb, kc)
        return None

    def nerve_bisimplicial(self) -> Bisimplicial:
        """Bisimplicial nerve: generator ``(objects, q-simplices)`` of bidegree ``(p, q)``."""
        order = self.reachability().linear_extension()
        gens: dict = {}
        for x in order:
            gens[((x,), ())] = (0, 0)
        frontier = [(x,) for x in order]
        paths = []
        while frontier:
            nxt = []
            for objs in frontier:
                for y in order:
                    if (objs[-1], y) in self.homs:
                        nxt.append(objs + (y,))
            paths.extend(nxt)
            frontier = nxt
        for objs in paths:
            homs = [self.homs[(objs[k], objs[k + 1])] for k in range(len(objs) - 1)]
            top = sum(h.dim for h in homs)
            for q in range(top + 1):
                for combo in _simplex_tuples(homs, q):
                    gens[(objs, combo)] = (len(objs) - 1, q)

        def normalize(objs, sims, q):
            if len(objs) == 1:
                return identity(0), (0,) * (q + 1), ((objs[0],), ())
            rho, rest = split_common([s[0] for s in sims])
            return identity(len(objs) - 1), rho, (objs, tuple((r, s[1]) for r, s in zip(rest, sims)))

        def hface(key, i):
            objs, sims = key
            p = len(objs) - 1
            q = len(sims[0][0]) - 1
            if i == 0:
                o, s = objs[1:], sims[1:]
            elif i == p:
                o, s = objs[:-1], sims[:-1]
            else:
                comp = self.compose_simplices(objs[i - 1], objs[i], objs[i + 1], sims[i], sims[i - 1])
                o = objs[:i] + objs[i + 1 :]
                s = sims[: i - 1] + (comp,) + sims[i + 1 :]
            return normalize(o, s, q)

        def vface(key, j):
            objs, sims = key
            q = len(sims[0][0]) - 1
            s = tuple(self.homs[(objs[k], objs[k + 1])].gface(sims[k], j) for k in range(len(sims)))
            return normalize(objs, s, q - 1)

        return Bisimplicial(gens, hface, vface)

    def classifying_space(self, validate: bool = True) -> FinSimpSet:
        out = diagonal(self.nerve_bisimplicial(), validate=validate)
        out.meta["tier"] = "enriched"
        return out


def _simplex_tuples(homs: Sequence[FinSimpSet], q: int):
    """Tuples of general ``q``-simplices, one per hom, with no common degeneracy."""
    per = []
    for h in homs:
        opts = []
        for c in h.cells():
            if c[0] > q:
                continue
            for reps in combinations(range(q), q - c[0]):
                opts.append((surj_from_repeats(q, reps), c))
        per.append(opts)
    for combo in cartesian(*per):
        common = frozenset(range(q))
        for s, _ in combo:
            common &= frozenset(i for i in range(q) if s[i] == s[i + 1])
        if not common:
            yield tuple(combo)


def classifying_space(c: AcycCat | EnrichedCat, tier: str | None = None) -> FinSimpSet:
    """``BC``.  Discrete categories use the chain nerve unless ``tier='enriched'``."""
    if isinstance(c, EnrichedCat):
        return c.classifying_space()
    if tier == "enriched" or (tier is None and c.is_poset_enriched()):
        return c.enriched().classifying_space()
    return c.nondegenerate_nerve()


def nondegenerate_nerve(c: AcycCat | EnrichedCat):
    if isinstance(c, EnrichedCat):
        return c.nerve_bisimplicial()
    return c.nondegenerate_nerve()


# ---------------------------------------------------------------------------
# constructors


def from_poset(p: FinPoset, name: str = "") -> AcycCat:
    """The category of a poset; the morphism ``a -> b`` is named ``(a, b)``."""
    mors = {(a, b): (a, b) for a in p for b in p.strictly_above(a)}
    comp = {((b, c), (a, b)): (a, c) for (a, b) in mors for (b2, c) in mors if b2 == b}
    return AcycCat(p.elements, mors, comp, name=name)


def chain_category(n: int) -> AcycCat:
    from .poset import chain_poset

    return from_poset(chain_poset(n), name=f"[{n}]")


def free_category(objects: Sequence[Hashable], edges: dict[Hashable, tuple]) -> AcycCat:
    """Free category on a finite DAG; morphisms are paths (tuples of edge names)."""
    succ: dict = {}
    for e, (s, t) in edges.items():
        succ.setdefault(s, []).append((e, t))
    paths: dict = {}
    for x in objects:
        stack = [((), x)]
        while stack:
            path, end = stack.pop()
            for e, t in succ.get(end, []):
                np_ = path + (e,)
                if len(np_) > len(edges):
                    raise CategoryError("edge graph has a cycle")
                paths[np_] = (x, t)
                stack.append((np_, t))
    comp = {(g, f): f + g for g in paths for f in paths if paths[f][1] == paths[g][0]}
    return AcycCat(objects, paths, comp)


def iso_check(a: AcycCat, b: AcycCat) -> dict | None:
    """Explicit isomorphism ``{"objects": ..., "morphisms": ...}`` or ``None``.

    Hom orders, when present on both sides, must be preserved and reflected.
    """
    if len(a.objects) != len(b.objects) or len(a.morphisms) != len(b.morphisms):
        return None
    if sorted(a.hom_table().values()) != sorted(b.hom_table().values()):
        return None
    ta, tb = a.hom_table(), b.hom_table()

    def profile(c: AcycCat, t, x):
        return (
            tuple(sorted(t[(x, y)] for y in c.objects if y != x)),
            tuple(sorted(t[(y, x)] for y in c.objects if y != x)),
        )

    prof_b = {y: profile(b, tb, y) for y in b.objects}
    order_a = a.reachability().linear_extension()
    obj_map: dict = {}
    used: set = set()
    mor_order = sorted(a.morphisms, key=lambda m: (_depth(a, m), repr(m)))
    factorizations = {m: [] for m in a.morphisms}
    for (g, f), h in a.composition.items():
        if h in factorizations:
            factorizations[h].append((g, f))
    ordered = a.hom_order is not None and b.hom_order is not None
    if (a.hom_order is None) != (b.hom_order is None):
        return None

    lt_a = _hom_lt(a) if ordered else None
    lt_b = _hom_lt(b) if ordered else None

    involving: dict = {m: [] for m in a.morphisms}
    for (g, f), h in a.composition.items():
        if is_ident(g) or is_ident(f):
            continue
        for m in {g, f, h}:
            involving[m].append((g, f, h))

    def try_morphisms() -> dict | None:
        mm: dict = {}
        usedm: set = set()

        def consistent(m, n) -> bool:
            if ordered:
                for m2, n2 in mm.items():
                    if a.morphisms[m2] == a.morphisms[m] and (lt_a(m, m2) != lt_b(n, n2) or lt_a(m2, m) != lt_b(n2, n)):
                        return False
            mm[m] = n
            try:
                for g, f, h in involving[m]:
                    if g in mm and f in mm and h in mm and b.compose(mm[g], mm[f]) != mm[h]:
                        return False
                return True
            finally:
                del mm[m]

        def go(k: int) -> bool:
            if k == len(mor_order):
                return True
            m = mor_order[k]
            s, t = a.morphisms[m]
            cands = b.nonid_hom(obj_map[s], obj_map[t])
            forced = [b.compose(mm[g], mm[f]) for g, f in factorizations[m] if g in mm and f in mm]
            if forced:
                cands = [forced[0]] if forced[0] in cands else []
            for n in cands:
                if n in usedm or not consistent(m, n):
                    continue
                mm[m] = n
                usedm.add(n)
                if go(k + 1):
                    return True
                del mm[m]
                usedm.discard(n)
            return False

        return dict(mm) if go(0) else None

    def go_obj(k: int):
        if k == len(order_a):
            mm = try_morphisms()
            if mm is None:
                return None
            if ordered and not _order_reflected(a, b, obj_map, mm):
                return None
            return {"objects": dict(obj_map), "morphisms": mm}
        x = order_a[k]
        px = profile(a, ta, x)
        for y in b.objects:
            if y in used or prof_b[y] != px:
                continue
            if any(ta[(x, x2)] != tb[(y, obj_map[x2])] or ta[(x2, x)] != tb[(obj_map[x2], y)] for x2 in obj_map):
                continue
            obj_map[x] = y
            used.add(y)
            got = go_obj(k + 1)
            if got is not None:
                return got
            del obj_map[x]
            used.discard(y)
        return None

    return go_obj(0)


def _hom_lt(c: AcycCat):
    """Strict order on morphisms, each hom ordered separately."""
    posets = {}
    for x in c.objects:
        for y in c.objects:
            if c.nonid_hom(x, y):
                posets[(x, y)] = c.hom_poset(x, y)

    def lt(m1, m2) -> bool:
        return posets[c.morphisms[m1]].lt(m1, m2)

    return lt


def _order_reflected(a: AcycCat, b: AcycCat, obj_map, mm) -> bool:
    for x in a.objects:
        for y in a.objects:
            ms = a.nonid_hom(x, y)
            if len(ms) < 2:
                continue
            pa = a.hom_poset(x, y)
            pb = b.hom_poset(obj_map[x], obj_map[y])
            for m1 in ms:
                for m2 in ms:
                    if pa.lt(m1, m2) != pb.lt(mm[m1], mm[m2]):
                        return False
    return True


def _depth(c: AcycCat, m) -> int:
    """Longest factorisation length of ``m`` into non-identities."""
    memo: dict = {}

    def d(x):
        if x in memo:
            return memo[x]
        best = 1
        for (g, f), h in c.composition.items():
            if h == x and not is_ident(g) and not is_ident(f):
                best = max(best, d(g) + d(f))
        memo[x] = best
        return best

    return d(m)


def mismatch_invariant(a: AcycCat, b: AcycCat) -> dict:
    """A cheap invariant separating ``a`` from ``b`` when one exists."""
    checks = {
        "objects": (len(a.objects), len(b.objects)),
        "morphisms": (len(a.morphisms), len(b.morphisms)),
        "hom_sizes": (sorted(a.hom_table().values()), sorted(b.hom_table().values())),
    }
    for name, (x, y) in checks.items():
        if x != y:
            return {"invariant": name, "left": x, "right": y}
    out_a = sorted(sorted(n for (s, _), n in a.hom_table().items() if s == x) for x in a.objects)
    out_b = sorted(sorted(n for (s, _), n in b.hom_table().items() if s == x) for x in b.objects)
    if out_a != out_b:
        return {"invariant": "out_degree_profile", "left": out_a, "right": out_b}
    return {"invariant": "none_cheap", "left": None, "right": None}


# ---------------------------------------------------------------------------
# random categories


def random_acyclic_category(rng: random.Random, max_objects: int = 5, max_hom: int = 3, edge_p: float = 0.5) -> AcycCat:
    """Quotient of a free category on a random DAG with every hom of size ``<= max_hom``.

    Parallel morphisms are merged at random; a congruence closure keeps
    composition well defined after each merge.
    """
    n = rng.randint(1, max_objects)
    edges = {}
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < edge_p:
                for k in range(rng.randint(1, 2)):
                    edges[f"e{i}{j}{k}"] = (i, j)
    free = free_category(range(n), edges)
    parent = {m: m for m in free.morphisms}

    def find(m):
        while parent[m] != m:
            parent[m] = parent[parent[m]]
            m = parent[m]
        return m

    def union(x, y) -> bool:
        rx, ry = find(x), find(y)
        if rx == ry:
            return False
        if (len(rx), rx) > (len(ry), ry):
            rx, ry = ry, rx
        parent[ry] = rx
        return True

    edge_list = sorted(edges)

    def close() -> None:
        changed = True
        while changed:
            changed = False
            classes: dict = {}
            for m in free.morphisms:
                classes.setdefault(find(m), []).append(m)
            for members in classes.values():
                if len(members) < 2:
                    continue
                s, t = free.morphisms[members[0]]
                for e in edge_list:
                    es, et = edges[e]
                    if es == t:
                        first = members[0] + (e,)
                        for m in members[1:]:
                            changed |= union(first, m + (e,))
                    if et == s:
                        first = (e,) + members[0]
                        for m in members[1:]:
                            changed |= union(first, (e,) + m)

    def hom_classes():
        out: dict = {}
        for m, st in free.morphisms.items():
            out.setdefault(st, set()).add(find(m))
        return out

    merge_extra = rng.random()
    for _ in range(10 * len(free.morphisms) + 10):
        homs = hom_classes()
        big = sorted((st for st, cl in homs.items() if len(cl) > max_hom), key=repr)
        if big:
            st = big[0]
        else:
            many = sorted((st for st, cl in homs.items() if len(cl) > 1), key=repr)
            if not many or rng.random() > merge_extra * 0.5:
                break
            st = rng.choice(many)
        cl = sorted(homs[st], key=lambda m: (len(m), m))
        a, b = rng.sample(cl, 2)
        union(a, b)
        close()
    reps = sorted({find(m) for m in free.morphisms}, key=lambda m: (free.morphisms[m], len(m), m))
    names = {r: f"m{k}" for k, r in enumerate(reps)}
    mors = {names[r]: free.morphisms[r] for r in reps}
    comp = {}
    for g in reps:
        for f in reps:
            if free.morphisms[f][1] == free.morphisms[g][0]:
                comp[(names[g], names[f])] = names[find(f + g)]
    return AcycCat(range(n), mors, comp, name="random")


def random_poset(rng: random.Random, n: int, p: float = 0.35) -> FinPoset:
    rel = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    perm = list(range(n))
    rng.shuffle(perm)
    return FinPoset(perm, rel)


def brute_force_f_vector(c: AcycCat) -> list[int]:
    """``f_k = sum over strict object chains x0 < ... < xk`` of ``prod |C(x_{i-1}, x_i)|``."""
    p = c.reachability()
    counts: dict[int, int] = {}
    for ch in p.chains():
        w = 1
        for s, t in zip(ch, ch[1:]):
            w *= len(c.nonid_hom(s, t))
        if w:
            counts[len(ch) - 1] = counts.get(len(ch) - 1, 0) + w
    return [counts.get(k, 0) for k in range(max(counts, default=-1) + 1)]
