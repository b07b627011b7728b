"""Cell-aligned stratified spaces and executable stratification conditions.

A :class:`StratSpace` labels every nondegenerate cell of a finite
simplicial set by an element of a poset.  Strata are unions of open cells,
so closures, continuity and openness of the label map reduce to finite
statements about iterated faces.
"""

from __future__ import annotations

import random
from collections.abc import Hashable, Iterable
from dataclasses import dataclass, field
from itertools import combinations

from .poset import FinPoset, join_poset
from .simpset import Cell, FinSimpSet, from_simplicial_complex, join, point

CONDITIONS = ("continuous", "open", "closure_order", "frontier", "closed_unions")


class StratError(ValueError):
    pass


class StratSpace:
    """A finite simplicial set with a poset-valued label on each nondegenerate cell."""

    def __init__(self, space: FinSimpSet, poset: FinPoset, labels: dict[Cell, Hashable], name: str = ""):
        self.space = space
        self.poset = poset
        self.labels = dict(labels)
        self.name = name
        cells = set(space.cells())
        if set(self.labels) != cells:
            missing = cells - set(self.labels)
            extra = set(self.labels) - cells
            raise StratError(f"labels must cover exactly the cells (missing {sorted(missing)[:3]}, extra {sorted(extra)[:3]})")
        for c, lab in self.labels.items():
            if lab not in poset:
                raise StratError(f"cell {c} carries label {lab!r} outside the poset")
        self._closure: dict = {}
        self._faces: dict = {}

    @property
    def image(self) -> list:
        used = set(self.labels.values())
        return [e for e in self.poset.elements if e in used]

    @property
    def surjective(self) -> bool:
        return len(self.image) == len(self.poset)

    def stratum(self, lam: Hashable) -> set[Cell]:
        return {c for c, l in self.labels.items() if l == lam}

    def strata(self) -> dict:
        out: dict = {lam: set() for lam in self.image}
        for c, l in self.labels.items():
            out[l].add(c)
        return out

    def faces_of(self, c: Cell) -> set[Cell]:
        """All iterated faces of ``c`` including ``c``."""
        got = self._faces.get(c)
        if got is None:
            got = self.space.closure([c])
            self._faces[c] = got
        return got

    def closure(self, lam: Hashable) -> set[Cell]:
        if lam not in self.poset:
            raise StratError(f"unknown label {lam!r}")
        got = self._closure.get(lam)
        if got is None:
            got = set()
            for c in self.stratum(lam):
                got |= self.faces_of(c)
            self._closure[lam] = got
        return got

    def preimage(self, labels: Iterable[Hashable]) -> set[Cell]:
        labels = set(labels)
        return {c for c, l in self.labels.items() if l in labels}

    def is_closed(self, cells: set[Cell]) -> bool:
        return all(self.space.boundary_cells(c) <= cells for c in cells)

    def __repr__(self) -> str:
        return f"StratSpace({self.space!r}, {len(self.image)} strata)"


@dataclass
class Verdict:
    ok: bool
    witness: object = None


@dataclass
class StratReport:
    conditions: dict[str, Verdict] = field(default_factory=dict)
    connected: dict = field(default_factory=dict)
    locally_closed: dict = field(default_factory=dict)
    closure_finite: Verdict = field(default_factory=lambda: Verdict(True))
    weak_topology: Verdict = field(default_factory=lambda: Verdict(True))

    def holds(self, name: str) -> bool:
        return self.conditions[name].ok

    @property
    def stratification(self) -> bool:
        """Open, continuous, with connected locally closed strata."""
        return (
            self.holds("continuous")
            and self.holds("open")
            and all(v.ok for v in self.connected.values())
            and all(v.ok for v in self.locally_closed.values())
        )

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.conditions.values()) and self.stratification

    def failures(self) -> list[tuple[str, object]]:
        out = [(k, v.witness) for k, v in self.conditions.items() if not v.ok]
        out += [(f"connected:{k}", v.witness) for k, v in self.connected.items() if not v.ok]
        out += [(f"locally_closed:{k}", v.witness) for k, v in self.locally_closed.items() if not v.ok]
        return out

    def as_lines(self) -> list[tuple[bool, str]]:
        lines = [(v.ok, f"{k}" + ("" if v.ok else f" witness={v.witness!r}")) for k, v in self.conditions.items()]
        lines += [(v.ok, f"connected {k!r}" + ("" if v.ok else f" witness={v.witness!r}")) for k, v in self.connected.items()]
        lines += [
            (v.ok, f"locally_closed {k!r}" + ("" if v.ok else f" witness={v.witness!r}")) for k, v in self.locally_closed.items()
        ]
        lines += [(self.closure_finite.ok, "closure_finite"), (self.weak_topology.ok, "weak_topology")]
        return lines


# ---------------------------------------------------------------------------
# individual criteria


def check_continuous(x: StratSpace) -> Verdict:
    """Closure of each stratum lies over the down-set of its label.

    The witness is ``(cell, face, label)``: a cell of the stratum, a face of
    it whose label is not below, and the stratum's label.
    """
    for lam in x.image:
        for c in sorted(x.stratum(lam)):
            for f in sorted(x.space.closure([c])):
                if not x.poset.leq(x.labels[f], lam):
                    return Verdict(False, (c, f, lam))
    return Verdict(True)


def check_open(x: StratSpace) -> Verdict:
    """Every stratum below ``lam`` lies in the closure of ``e_lam``."""
    for lam in x.image:
        cl = x.closure(lam)
        for c in sorted(x.preimage(x.poset.down_set(lam))):
            if c not in cl:
                return Verdict(False, (c, lam))
    return Verdict(True)


def check_closure_order(x: StratSpace) -> Verdict:
    """``e_mu`` inside the closure of ``e_lam`` exactly when ``mu <= lam``."""
    strata = x.strata()
    for lam in x.image:
        cl = x.closure(lam)
        for mu in x.image:
            if (strata[mu] <= cl) != x.poset.leq(mu, lam):
                return Verdict(False, (mu, lam))
    return Verdict(True)


def check_frontier(x: StratSpace) -> Verdict:
    strata = x.strata()
    for lam in x.image:
        cl = x.closure(lam)
        for mu in x.image:
            if strata[mu] & cl and not strata[mu] <= cl:
                return Verdict(False, (mu, lam))
    return Verdict(True)


def check_closed_unions(x: StratSpace, exhaustive_limit: int = 12) -> Verdict:
    """For each down-closed label set ``C``, the union of the closures of ``e_lam``, ``lam`` in ``C``, is closed.

    All down-sets are enumerated when the image has at most
    ``exhaustive_limit`` elements; otherwise principal down-sets and the
    whole image are tested.
    """
    image = x.image
    sub = x.poset.subposet(image)
    if len(image) <= exhaustive_limit:
        families = (set(c) for r in range(len(image) + 1) for c in combinations(image, r) if sub.is_down_closed(c))
    else:
        families = [set(sub.down_set(l)) for l in image] + [set(image)]
    for fam in families:
        union: set = set()
        for lam in fam:
            union |= x.closure(lam)
        if not x.is_closed(union):
            return Verdict(False, tuple(sorted(fam, key=sub.index)))
    return Verdict(True)


def stratum_connected(x: StratSpace, lam: Hashable) -> Verdict:
    cells = x.stratum(lam)
    if not cells:
        return Verdict(True)
    adj: dict = {c: set() for c in cells}
    for c in cells:
        for d in x.faces_of(c):
            if d in cells and d != c:
                adj[c].add(d)
                adj[d].add(c)
    start = min(cells)
    seen = {start}
    stack = [start]
    while stack:
        for d in adj[stack.pop()]:
            if d not in seen:
                seen.add(d)
                stack.append(d)
    if len(seen) == len(cells):
        return Verdict(True)
    return Verdict(False, (start, min(cells - seen)))


def stratum_locally_closed(x: StratSpace, lam: Hashable) -> Verdict:
    """``cl(e) - e`` must itself be closed."""
    rest = x.closure(lam) - x.stratum(lam)
    for c in sorted(rest):
        for f in sorted(x.space.boundary_cells(c)):
            if f not in rest:
                return Verdict(False, (c, f))
    return Verdict(True)


def check_conditions(x: StratSpace) -> StratReport:
    rep = StratReport()
    rep.conditions["continuous"] = check_continuous(x)
    rep.conditions["open"] = check_open(x)
    rep.conditions["closure_order"] = check_closure_order(x)
    rep.conditions["frontier"] = check_frontier(x)
    rep.conditions["closed_unions"] = check_closed_unions(x)
    for lam in x.image:
        rep.connected[lam] = stratum_connected(x, lam)
        rep.locally_closed[lam] = stratum_locally_closed(x, lam)
    return rep


# ---------------------------------------------------------------------------
# exhaustive oracle over label subsets


def exhaustive_continuity(x: StratSpace) -> bool:
    """Preimage of every Alexandroff-closed (down-closed) label set is closed."""
    image = x.image
    sub = x.poset.subposet(image)
    for r in range(len(image) + 1):
        for c in combinations(image, r):
            if sub.is_down_closed(c) and not x.is_closed(x.preimage(c)):
                return False
    return True


def exhaustive_openness(x: StratSpace) -> bool:
    """``pi^{-1}(cl B)`` lies in ``cl(pi^{-1}(B))`` for every label set ``B``."""
    image = x.image
    sub = x.poset.subposet(image)
    for r in range(1, len(image) + 1):
        for b in combinations(image, r):
            pre = x.preimage(sub.down_closure(b))
            cl: set = set()
            for lam in b:
                cl |= x.closure(lam)
            if not pre <= cl:
                return False
    return True


# ---------------------------------------------------------------------------
# constructors


def simplicial_stratification(x: FinSimpSet) -> StratSpace:
    """Each cell is its own stratum, ordered by the face relation; labels are cell keys."""
    elems = [x.key(c) for c in x.cells()]
    rel = [(x.key(f), x.key(c)) for c in x.cells() for f in x.boundary_cells(c)]
    return StratSpace(x, FinPoset(elems, rel), {c: x.key(c) for c in x.cells()}, name="simplicial")


def single_stratum(x: FinSimpSet, label: Hashable = "*") -> StratSpace:
    return StratSpace(x, FinPoset([label]), {c: label for c in x.cells()})


def face_poset(x: StratSpace) -> FinPoset:
    """``P(X)``: the label image ordered by closure containment."""
    v = check_closure_order(x)
    if not v.ok:
        raise StratError(f"closure order does not match the labels: witness {v.witness!r}")
    image = x.image
    strata = x.strata()
    rel = [(mu, lam) for lam in image for mu in image if mu != lam and strata[mu] <= x.closure(lam)]
    return FinPoset(image, rel)


def join_strat(a: StratSpace, b: StratSpace, check: bool = True) -> StratSpace:
    """Join of stratified spaces, labelled by ``P(a) * P(b)``."""
    if check:
        for s in (a, b):
            if not (check_continuous(s).ok and check_open(s).ok):
                raise StratError("join needs both factors to be open and continuous")
    space = join(a.space, b.space)
    pa = a.poset.subposet(a.image)
    pb = b.poset.subposet(b.image)
    labels = {}
    for c in space.cells():
        key = space.key(c)
        if key[0] == "L":
            labels[c] = ("L", a.labels[key[1]])
        elif key[0] == "R":
            labels[c] = ("R", b.labels[key[1]])
        else:
            labels[c] = ("J", a.labels[key[1]], b.labels[key[2]])
    return StratSpace(space, join_poset(pa, pb), labels, name="join")


def cone_strat(x: StratSpace) -> StratSpace:
    """Apex ``("L", "*")``, open cone strata ``("J", "*", lam)`` and base ``("R", lam)``."""
    return join_strat(single_stratum(point()), x)


# ---------------------------------------------------------------------------
# randomized implication harness


def random_strat_space(rng: random.Random, max_cells: int = 12) -> StratSpace:
    """A random labelled complex with at most ``max_cells`` cells.

    Half of the samples coarsen the simplicial stratification (so the
    conditions often hold); the rest use a random poset and labelling.
    """
    while True:
        nv = rng.randint(1, 4)
        tops = [tuple(sorted(rng.sample(range(nv), rng.randint(1, min(3, nv))))) for _ in range(rng.randint(1, 3))]
        space = from_simplicial_complex(tops)
        if space.num_cells() <= max_cells:
            break
    cells = list(space.cells())
    k = rng.randint(1, len(cells))
    if rng.random() < 0.5:
        groups = {c: rng.randrange(k) for c in cells}
        used = sorted(set(groups.values()))
        rel = {(groups[f], groups[c]) for c in cells for f in space.boundary_cells(c) if groups[f] != groups[c]}
        if rng.random() < 0.3 and rel:
            rel.discard(rng.choice(sorted(rel)))
        try:
            poset = FinPoset(used, sorted(rel))
            return StratSpace(space, poset, groups)
        except ValueError:
            pass
    elems = list(range(k))
    rel = [(i, j) for i in elems for j in elems if i < j and rng.random() < 0.4]
    poset = FinPoset(elems, rel)
    labels = {c: elems[i] if i < k else rng.choice(elems) for i, c in enumerate(rng.sample(cells, len(cells)))}
    return StratSpace(space, poset.subposet(set(labels.values())), labels)


@dataclass
class ImplicationReport:
    samples: int = 0
    violations: list = field(default_factory=list)
    counts: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations


def implication_violations(x: StratSpace, oracle: bool = True) -> list[str]:
    """Names of the implications that fail on ``x`` (empty when all hold)."""
    rep = check_conditions(x)
    c1, c2, c3, c4, c5 = (rep.holds(n) for n in CONDITIONS)
    out = []
    if c1 and c2 != c3:
        out.append("continuous => (open <=> closure_order)")
    if c1 and c3 and not c4:
        out.append("continuous & closure_order => frontier")
    if c3 and c4 and c5 and not c1:
        out.append("closure_order & frontier & closed_unions => continuous")
    if c1 and not c5:
        out.append("continuous => closed_unions")
    exact = all(x.closure(l) == x.preimage(x.poset.down_set(l)) for l in x.image)
    if (c1 and c2) != exact or (c1 and c3) != exact:
        out.append("continuous & open <=> closure equals down-set preimage")
    if oracle and len(x.image) <= 12:
        if exhaustive_continuity(x) != c1:
            out.append("singleton continuity criterion disagrees with exhaustive check")
        if exhaustive_openness(x) != c2:
            out.append("singleton openness criterion disagrees with exhaustive check")
    return out


def implications_harness(samples: int = 100, seed: int = 0, max_cells: int = 12, oracle: bool = True) -> ImplicationReport:
    rng = random.Random(seed)
    rep = ImplicationReport()
    for n in CONDITIONS:
        rep.counts[n] = 0
    for i in range(samples):
        x = random_strat_space(rng, max_cells)
        checks = check_conditions(x)
        for n in CONDITIONS:
            rep.counts[n] += checks.holds(n)
        bad = implication_violations(x, oracle=oracle)
        rep.samples += 1
        if bad:
            rep.violations.append((i, bad, x))
            break
    return rep
