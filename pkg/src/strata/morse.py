"""Discrete Morse theory on regular face posets.

Matchings, both acyclicity tests, the Morse chain complex through the
gradient flow, flow categories and the critical-cell stratification of
their double classifying spaces.
"""

from __future__ import annotations

import random
from collections.abc import Hashable, Iterable, Mapping
from dataclasses import dataclass
from fractions import Fraction
from graphlib import CycleError, TopologicalSorter
from itertools import combinations

import numpy as np

from . import kernels
from .acyccat import AcycCat, EnrichedCat, iso_check
from .homology import ChainComplex, HomologyReport, homology_of_complex
from .poset import FinPoset, order_complex
from .simpset import FinSimpSet, from_simplicial_complex
from .stellar import StellarReport, roundtrip_enriched, unstable_stratification
from .strat import StratSpace


class MorseError(ValueError):
    """Malformed input or a failed internal consistency check, with a witness."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message if witness is None else f"{message}: {witness!r}")
        self.witness = witness


# ---------------------------------------------------------------------------
# regular complexes


class RegComplex:
    """Graded face poset of a finite regular CW complex.

    ``faces[c]`` lists the codimension-one faces of ``c``.  ``incidence``
    maps ``(cell, face)`` to ``+1`` or ``-1`` when sign data is known
    (simplicial input); otherwise chains are taken mod 2.
    """

    def __init__(
        self,
        dims: Mapping[Hashable, int],
        faces: Mapping[Hashable, Iterable[Hashable]],
        incidence: Mapping[tuple, int] | None = None,
        name: str = "",
    ):
        self.dims = dict(dims)
        self.cells = sorted(self.dims, key=lambda c: (self.dims[c], repr(c)))
        self.faces = {c: tuple(faces.get(c, ())) for c in self.cells}
        self.cofaces: dict = {c: [] for c in self.cells}
        for c in self.cells:
            for f in self.faces[c]:
                if f not in self.dims:
                    raise MorseError("face of an unknown cell", (c, f))
                self.cofaces[f].append(c)
        self.incidence = dict(incidence) if incidence is not None else None
        self.name = name

    @property
    def signed(self) -> bool:
        return self.incidence is not None

    @property
    def dim(self) -> int:
        return max(self.dims.values(), default=-1)

    def cells_of_dim(self, d: int) -> list:
        return [c for c in self.cells if self.dims[c] == d]

    @property
    def f_vector(self) -> list[int]:
        return [len(self.cells_of_dim(d)) for d in range(self.dim + 1)]

    def covers(self) -> list[tuple]:
        return [(f, c) for c in self.cells for f in self.faces[c]]

    def inc(self, cell: Hashable, face: Hashable) -> int:
        return self.incidence[(cell, face)] if self.incidence is not None else 1

    def validate(self) -> list[str]:
        """Grading and diamond checks; returns a list of problems."""
        problems = []
        for f, c in self.covers():
            if self.dims[c] != self.dims[f] + 1:
                problems.append(f"cover {f!r} < {c!r} skips a dimension")
        for c in self.cells:
            if self.dims[c] == 1 and len(set(self.faces[c])) != 2:
                problems.append(f"edge {c!r} does not have two distinct endpoints")
            if self.dims[c] >= 2:
                below: dict = {}
                for f in self.faces[c]:
                    for g in self.faces[f]:
                        below[g] = below.get(g, 0) + 1
                for g, k in below.items():
                    if k != 2:
                        problems.append(f"interval [{g!r}, {c!r}] has {k} middle elements")
        return problems

    def poset(self) -> FinPoset:
        return FinPoset(self.cells, self.covers())

    def chain_complex(self) -> ChainComplex:
        index = {c: i for d in range(self.dim + 1) for i, c in enumerate(self.cells_of_dim(d))}
        ranks = self.f_vector
        mats = {}
        for n in range(1, len(ranks)):
            d = np.zeros((ranks[n - 1], ranks[n]), dtype=np.int64)
            for c in self.cells_of_dim(n):
                for f in self.faces[c]:
                    d[index[f], index[c]] += self.inc(c, f)
            mats[n] = d
        return ChainComplex(ranks, mats)


def reg_from_simpset(x: FinSimpSet, name: str = "") -> RegComplex:
    """Cells named by vertex tuples, signs ``(-1)^i`` in the stored vertex order."""
    if not x.vertex_determined():
        raise MorseError("simplicial input must be vertex-determined")
    label = {}
    for v in x.cells(0):
        k = x.key(v)
        label[v[1]] = k[0] if isinstance(k, tuple) and len(k) == 1 else k
    names = {c: tuple(label[v] for v in x.vertices(c)) for c in x.cells()}
    dims, faces, inc = {}, {}, {}
    for c, nm in names.items():
        if len(set(nm)) != len(nm):
            raise MorseError("simplex with a repeated vertex", nm)
        dims[nm] = c[0]
        if c[0] == 0:
            continue
        fs = []
        for i in range(c[0] + 1):
            fn = nm[:i] + nm[i + 1 :]
            fs.append(fn)
            inc[(nm, fn)] = -1 if i % 2 else 1
        faces[nm] = fs
    return RegComplex(dims, faces, inc, name=name)


def reg_from_simplices(simplices: Iterable[Iterable[Hashable]], name: str = "") -> RegComplex:
    return reg_from_simpset(from_simplicial_complex(simplices), name)


def reg_from_cells(dims: Mapping[Hashable, int], faces: Mapping[Hashable, Iterable[Hashable]], name: str = "") -> RegComplex:
    """Abstract regular complex without sign data (mod-2 chains)."""
    return RegComplex(dims, faces, None, name)


# ---------------------------------------------------------------------------
# matchings


@dataclass(frozen=True)
class Matching:
    pairs: tuple[tuple[Hashable, Hashable], ...]

    @property
    def up(self) -> dict:
        return {lo: hi for lo, hi in self.pairs}

    @property
    def down(self) -> dict:
        return {hi: lo for lo, hi in self.pairs}

    def matched(self) -> set:
        return {c for p in self.pairs for c in p}

    def critical(self, c: RegComplex) -> list:
        m = self.matched()
        return [x for x in c.cells if x not in m]


def matching(c: RegComplex, pairs: Iterable[tuple]) -> Matching:
    """Structural validation: every pair is a cover and no cell is used twice."""
    seen: set = set()
    out = []
    for lo, hi in pairs:
        if hi not in c.dims or lo not in c.faces.get(hi, ()):
            raise MorseError("pair is not a cover relation", (lo, hi))
        for x in (lo, hi):
            if x in seen:
                raise MorseError("cell matched twice", x)
            seen.add(x)
        out.append((lo, hi))
    return Matching(tuple(out))


def hasse_digraph(c: RegComplex, m: Matching) -> dict:
    """Successor lists: covers point down, matched covers are reversed."""
    up = m.up
    succ: dict = {x: [] for x in c.cells}
    for f, x in c.covers():
        if up.get(f) == x:
            succ[f].append(x)
        else:
            succ[x].append(f)
    return succ


def hasse_cycle(c: RegComplex, m: Matching) -> list | None:
    """Cycle in the modified Hasse digraph, via the standard library sorter."""
    succ = hasse_digraph(c, m)
    preds: dict = {x: set() for x in c.cells}
    for x, ys in succ.items():
        for y in ys:
            preds[y].add(x)
    try:
        tuple(TopologicalSorter(preds).static_order())
    except CycleError as exc:
        return list(exc.args[1])
    return None


def vpath_graph(c: RegComplex, m: Matching, p: int) -> dict:
    """``sigma -> sigma'`` for ``sigma'`` another face of ``sigma``'s partner, both matched upward."""
    up = m.up
    out = {}
    for s in c.cells_of_dim(p):
        if s in up:
            out[s] = [t for t in c.faces[up[s]] if t != s and t in up]
    return out


def vpath_cycle(c: RegComplex, m: Matching) -> list | None:
    """Closed V-path search by depth-first colouring, one dimension at a time."""
    for p in range(c.dim):
        g = vpath_graph(c, m, p)
        colour = dict.fromkeys(g, 0)
        for root in g:
            if colour[root]:
                continue
            stack = [(root, iter(g[root]))]
            path = [root]
            colour[root] = 1
            while stack:
                node, it = stack[-1]
                nxt = next(it, None)
                if nxt is None:
                    colour[node] = 2
                    stack.pop()
                    path.pop()
                elif colour[nxt] == 1:
                    cyc = path[path.index(nxt) :]
                    out = []
                    for s in cyc:
                        out += [s, m.up[s]]
                    return out + [nxt]
                elif colour[nxt] == 0:
                    colour[nxt] = 1
                    stack.append((nxt, iter(g[nxt])))
                    path.append(nxt)
    return None


@dataclass
class MatchingReport:
    acyclic: bool
    witness: list | None
    critical: list
    pairs: int
    cross_checked: bool = True

    def as_dict(self) -> dict:
        return {"acyclic": self.acyclic, "witness": self.witness, "critical": self.critical, "pairs": self.pairs}


def validate_matching(c: RegComplex, m: Matching) -> MatchingReport:
    """Acyclicity by the Hasse digraph, cross-checked against closed V-paths."""
    m = matching(c, m.pairs)
    hc = hasse_cycle(c, m)
    vc = vpath_cycle(c, m)
    if (hc is None) != (vc is None):
        raise MorseError("acyclicity tests disagree", (hc, vc))
    return MatchingReport(hc is None, vc, m.critical(c), len(m.pairs))


def morse_function_to_matching(c: RegComplex, f: Mapping[Hashable, Fraction | int | float]) -> Matching:
    """Pair each cell with its unique coface of no greater value."""
    missing = [x for x in c.cells if x not in f]
    if missing:
        raise MorseError("function is undefined on a cell", missing[0])
    pairs = []
    for x in c.cells:
        ups = [y for y in c.cofaces[x] if f[y] <= f[x]]
        downs = [y for y in c.faces[x] if f[y] >= f[x]]
        if len(ups) > 1 or len(downs) > 1:
            raise MorseError("not a discrete Morse function", x)
        if ups:
            pairs.append((x, ups[0]))
    return matching(c, pairs)


def matching_to_morse_function(c: RegComplex, m: Matching) -> dict:
    """A discrete Morse function inducing the given acyclic matching."""
    down = m.down
    node = {x: down.get(x, x) for x in c.cells}
    preds: dict = {node[x]: set() for x in c.cells}
    for f, x in c.covers():
        if node[f] != node[x]:
            preds[node[x]].add(node[f])
    try:
        order = list(TopologicalSorter(preds).static_order())
    except CycleError as exc:
        raise MorseError("matching is not acyclic", list(exc.args[1])) from None
    rank = {n: k for k, n in enumerate(order)}
    out = {}
    for x in c.cells:
        r = Fraction(rank[node[x]])
        out[x] = r + Fraction(1, 2) if x in m.up else r
    return out


def dimension_function(c: RegComplex) -> dict:
    return {x: Fraction(c.dims[x]) for x in c.cells}


# ---------------------------------------------------------------------------
# V-paths and the Morse complex


@dataclass(frozen=True)
class VPath:
    cells: tuple
    weight: int

    @property
    def start(self):
        return self.cells[0]

    @property
    def end(self):
        return self.cells[-1]


def v_paths(c: RegComplex, m: Matching, tau: Hashable) -> list[VPath]:
    """Gradient paths from ``tau`` through matched pairs down to critical cells.

    Each path is ``tau > s0 < t0 > s1 < ... > s`` with ``s`` critical;
    the weight is the signed product of incidences (``1`` when unsigned).
    """
    up, crit = m.up, set(m.critical(c))
    out = []

    def walk(cells, weight):
        s = cells[-1]
        if s in crit:
            out.append(VPath(tuple(cells), weight))
            return
        if s not in up:
            return
        t = up[s]
        for s2 in c.faces[t]:
            if s2 != s:
                walk(cells + [t, s2], weight * -c.inc(t, s) * c.inc(t, s2))

    for s in c.faces[tau]:
        walk([tau, s], c.inc(tau, s))
    return out


@dataclass
class MorseComplex:
    critical: dict
    complex: ChainComplex
    homology: HomologyReport | None
    mod2_betti: list[int]
    signed: bool

    def as_dict(self) -> dict:
        out = {
            "critical": {str(d): [list(x) if isinstance(x, tuple) else x for x in cs] for d, cs in self.critical.items()},
            "ranks": self.complex.ranks,
            "boundaries": {str(n): self.complex.boundary(n).tolist() for n in range(1, len(self.complex.ranks))},
            "signed": self.signed,
            "mod2_betti": self.mod2_betti,
        }
        if self.homology is not None:
            out["homology"] = self.homology.as_dict()
        return out


def _flow_boundary(c: RegComplex, m: Matching, tau: Hashable, order: list, signed: bool) -> dict:
    """Push ``d(tau)`` along the flow until only critical and dead-end cells carry weight."""
    up = m.up
    chain: dict = {}
    for s in c.faces[tau]:
        chain[s] = chain.get(s, 0) + c.inc(tau, s)
    for s in order:
        a = chain.pop(s, 0)
        if signed and a == 0 or not signed and a % 2 == 0:
            continue
        t = up[s]
        for s2 in c.faces[t]:
            if s2 != s:
                chain[s2] = chain.get(s2, 0) - a * c.inc(t, s) * c.inc(t, s2)
    return chain


def _mod2_betti(cc: ChainComplex, backend: str | None = None) -> list[int]:
    n = len(cc.ranks)
    r = [0] * (n + 1)
    for k in range(1, n):
        b = cc.boundary(k)
        r[k] = kernels.rank_gf2(b % 2, backend=backend) if b.size else 0
    return [cc.ranks[k] - r[k] - r[k + 1] for k in range(n)]


def morse_complex(c: RegComplex, m: Matching, signed: bool | None = None, check: bool = True) -> MorseComplex:
    """Critical cells with boundary given by flow counts; homology must match ``c``."""
    signed = c.signed if signed is None else signed
    if signed and not c.signed:
        raise MorseError("signed Morse boundaries need simplicial sign data")
    rep = validate_matching(c, m)
    if not rep.acyclic:
        raise MorseError("matching is not acyclic", rep.witness)
    crit = {d: [x for x in m.critical(c) if c.dims[x] == d] for d in range(c.dim + 1)}
    ranks = [len(crit[d]) for d in range(c.dim + 1)]
    mats = {}
    for p in range(c.dim):
        g = vpath_graph(c, m, p)
        preds: dict = {s: set() for s in g}
        for s, ts in g.items():
            for t in ts:
                preds[t].add(s)
        order = list(TopologicalSorter(preds).static_order())
        row = {x: i for i, x in enumerate(crit[p])}
        d = np.zeros((ranks[p], ranks[p + 1]), dtype=np.int64)
        for j, tau in enumerate(crit[p + 1]):
            for s, a in _flow_boundary(c, m, tau, order, signed).items():
                if s in row:
                    d[row[s], j] = a if signed else a % 2
        mats[p + 1] = d
    cc = ChainComplex(ranks, mats)
    if check and not cc.squares_to_zero() and signed:
        raise MorseError("Morse boundary does not square to zero")
    hom = homology_of_complex(cc) if signed else None
    mb = _mod2_betti(cc)
    if check:
        base = c.chain_complex()
        if signed:
            ref = homology_of_complex(base)
            if (ref.betti, ref.torsion) != (hom.betti, hom.torsion):
                raise MorseError("Morse homology differs from cellular homology", (hom.as_dict(), ref.as_dict()))
        if _mod2_betti(base) != mb:
            raise MorseError("mod-2 Morse homology differs from cellular homology", (mb, _mod2_betti(base)))
    return MorseComplex(crit, cc, hom, mb, signed)


def path_count_boundary(c: RegComplex, m: Matching, tau: Hashable) -> dict:
    """Morse boundary of ``tau`` by summing explicit V-path weights."""
    out: dict = {}
    for path in v_paths(c, m, tau):
        out[path.end] = out.get(path.end, 0) + path.weight
    return out


# ---------------------------------------------------------------------------
# flow categories


def _reaches(c: RegComplex, m: Matching) -> dict:
    succ = hasse_digraph(c, m)
    out = {}
    for x in c.cells:
        seen, todo = set(), [x]
        while todo:
            y = todo.pop()
            for z in succ[y]:
                if z not in seen:
                    seen.add(z)
                    todo.append(z)
        out[x] = seen
    return out


def vpath_name(path: VPath) -> str:
    return ">".join("".join(f"v{v}" for v in x) if isinstance(x, tuple) else str(x) for x in path.cells)


def cell_name(x: Hashable) -> str:
    return "".join(f"v{v}" for v in x) if isinstance(x, tuple) else str(x)


def flow_category(
    c: RegComplex,
    m: Matching,
    homs: Mapping[tuple, Mapping] | None = None,
    composition: Mapping[tuple, Hashable] | None = None,
) -> AcycCat:
    """Critical cells with V-path homs in gap one and supplied hom posets beyond.

    ``homs[(lo, hi)]`` is ``{"elements": [...], "order": [(a, b), ...]}``
    for critical cells with ``dim hi - dim lo >= 2``; ``composition`` maps
    ``(g, f)`` to ``g o f``.  Objects are named by :func:`cell_name`.
    """
    rep = validate_matching(c, m)
    if not rep.acyclic:
        raise MorseError("matching is not acyclic", rep.witness)
    homs = dict(homs or {})
    crit = rep.critical
    reach = _reaches(c, m)
    mors: dict = {}
    order: list = []
    for lo in crit:
        for hi in crit:
            gap = c.dims[hi] - c.dims[lo]
            if gap == 1:
                for path in v_paths(c, m, hi):
                    if path.end == lo:
                        mors[vpath_name(path)] = (cell_name(lo), cell_name(hi))
            elif gap >= 2:
                data = homs.pop((lo, hi), None)
                if data is None:
                    if lo in reach[hi]:
                        raise MorseError("hom poset needed for a pair of critical cells", (lo, hi))
                    continue
                for e in data["elements"]:
                    mors[e] = (cell_name(lo), cell_name(hi))
                order += [tuple(r) for r in data.get("order", ())]
    if homs:
        raise MorseError("hom data for a pair that is not two critical cells", next(iter(homs)))
    fc = AcycCat([cell_name(x) for x in crit], mors, dict(composition or {}), hom_order=order or None, name="flow")
    bad = fc.validate().failures()
    if bad:
        raise MorseError("flow category fails validation", bad[0])
    return fc


def prismatic_cells(ec: EnrichedCat) -> list[int]:
    """Counts of product cells ``(x0 < ... < xp, c1 x ... x cp)`` by dimension."""
    counts: dict = {}
    order = ec.reachability().linear_extension()

    def grow(objs, fv):
        p = len(objs) - 1
        for d, n in enumerate(fv):
            counts[p + d] = counts.get(p + d, 0) + n
        for y in order:
            h = ec.hom(objs[-1], y)
            if h is not None:
                hf = h.f_vector
                new = [0] * (len(fv) + len(hf) - 1)
                for i, a in enumerate(fv):
                    for j, b in enumerate(hf):
                        new[i + j] += a * b
                grow(objs + (y,), new)

    for x in order:
        grow((x,), [1])
    return [counts.get(d, 0) for d in range(max(counts, default=-1) + 1)]


@dataclass
class FlowReport:
    space: FinSimpSet
    strat: StratSpace
    critical: int
    prismatic: list[int]
    homology: HomologyReport
    face_category: StellarReport
    face_poset_iso: dict | None

    @property
    def strata(self) -> int:
        return len(self.strat.image)

    @property
    def ok(self) -> bool:
        return self.strata == self.critical and self.face_category.ok and self.face_poset_iso is not None

    def as_dict(self) -> dict:
        return {
            "critical_cells": self.critical,
            "strata": self.strata,
            "prismatic_cells": self.prismatic,
            "f_vector": self.space.f_vector,
            "homology": self.homology.as_dict(),
            "face_category_checks": [{"name": k.name, "ok": k.ok} for k in self.face_category.checks],
            "ok": self.ok,
        }


def classify_flow(fc: AcycCat) -> FlowReport:
    """Double classifying space with its unstable stratification."""
    from .homology import homology

    enr = fc.enriched()
    space = enr.classifying_space()
    strat = unstable_stratification(fc, space)
    rt = roundtrip_enriched(fc)
    return FlowReport(space, strat, len(fc.objects), prismatic_cells(enr), homology(space), rt.stellar, rt.isomorphism)


def hom_is_poset_nerve(fc: AcycCat, lo: Hashable, hi: Hashable) -> FinSimpSet:
    return order_complex(fc.hom_poset(lo, hi))


# ---------------------------------------------------------------------------
# fixtures and random inputs


def height_matching() -> tuple[RegComplex, Matching]:
    """Boundary of a tetrahedron with the matching induced by the height function."""
    from .fixtures import tetra_boundary, tetra_height_function

    c = reg_from_simpset(tetra_boundary(), name="tetra boundary")
    return c, morse_function_to_matching(c, tetra_height_function())


def hexagon_homs() -> tuple[dict, dict]:
    """Supplied hom poset for ``([v0], [v1 v2 v3])``: faces of the triangle boundary."""
    from .fixtures import sphere_face_poset

    faces = sphere_face_poset(2)
    names = {f: "".join(f"v{i + 1}" for i in f) for f in faces}
    data = {"elements": [names[f] for f in faces], "order": [(names[a], names[b]) for a, b in faces.covers]}
    return {((0,), (1, 2, 3)): data}, {}


def hexagon_flow() -> AcycCat:
    c, m = height_matching()
    homs, comp = hexagon_homs()
    return flow_category(c, m, homs, comp)


def two_cell_circle() -> tuple[RegComplex, Matching]:
    """Two vertices joined by two edges, with ``b`` matched to ``e1``."""
    from .fixtures import circle_two_cells

    cells, faces = circle_two_cells()
    c = reg_from_cells(cells, faces, name="two-cell circle")
    return c, matching(c, [("b", "e1")])


def random_simplicial_complex(rng: random.Random, max_cells: int = 50) -> RegComplex:
    n = rng.randint(3, 9)
    facets: set = set()
    closed: set = set()
    for _ in range(rng.randint(2, 14)):
        k = rng.randint(1, min(n, 4))
        s = tuple(sorted(rng.sample(range(n), k)))
        add = {f for r in range(1, k + 1) for f in combinations(s, r)}
        if len(closed | add) <= max_cells:
            closed |= add
            facets.add(s)
    if not facets:
        facets.add((0,))
    return reg_from_simplices(facets, name="random")


def random_acyclic_matching(rng: random.Random, c: RegComplex, tries: int | None = None) -> Matching:
    """Greedy random matching, keeping each pair only if acyclicity survives."""
    covers = c.covers()
    rng.shuffle(covers)
    pairs: list = []
    used: set = set()
    for lo, hi in covers[: tries or len(covers)]:
        if lo in used or hi in used:
            continue
        trial = Matching(tuple(pairs + [(lo, hi)]))
        if hasse_cycle(c, trial) is None:
            pairs.append((lo, hi))
            used |= {lo, hi}
    return Matching(tuple(pairs))


def flow_equivalent(a: AcycCat, b: AcycCat) -> bool:
    return iso_check(a, b) is not None


__all__ = [
    "FlowReport",
    "Matching",
    "MatchingReport",
    "MorseComplex",
    "MorseError",
    "RegComplex",
    "VPath",
    "classify_flow",
    "dimension_function",
    "flow_category",
    "hasse_cycle",
    "height_matching",
    "hexagon_flow",
    "hexagon_homs",
    "matching",
    "matching_to_morse_function",
    "morse_complex",
    "morse_function_to_matching",
    "path_count_boundary",
    "prismatic_cells",
    "random_acyclic_matching",
    "random_simplicial_complex",
    "reg_from_cells",
    "reg_from_simplices",
    "reg_from_simpset",
    "two_cell_circle",
    "v_paths",
    "validate_matching",
    "vpath_cycle",
]
