"""Finite posets, order complexes, and the regular-CW poset check."""

from __future__ import annotations

from collections.abc import Hashable, Iterable, Iterator, Sequence
from dataclasses import dataclass, field

from .homology import homology
from .simpset import FinSimpSet, build, identity


class PosetError(ValueError):
    pass


class FinPoset:
    """A finite poset given by generating relations ``a < b``.

    Elements keep the order in which they were supplied; ``leq`` is the
    reflexive-transitive closure of the relations and ``covers`` its Hasse
    diagram.
    """

    def __init__(self, elements: Iterable[Hashable], relations: Iterable[tuple[Hashable, Hashable]] = ()):
        self.elements: tuple = tuple(elements)
        if len(set(self.elements)) != len(self.elements):
            raise PosetError("duplicate elements")
        self._pos = {e: k for k, e in enumerate(self.elements)}
        succ: dict = {e: set() for e in self.elements}
        for a, b in relations:
            if a not in self._pos or b not in self._pos:
                raise PosetError(f"relation {a!r} < {b!r} mentions an unknown element")
            if a == b:
                continue
            succ[a].add(b)
        self._above: dict = {}
        for e in self.elements:
            seen = set()
            stack = list(succ[e])
            while stack:
                y = stack.pop()
                if y in seen:
                    continue
                seen.add(y)
                stack.extend(succ[y])
            if e in seen:
                raise PosetError(f"relations contain a cycle through {e!r}")
            self._above[e] = frozenset(seen)
        self._below: dict = {e: set() for e in self.elements}
        for e, ups in self._above.items():
            for y in ups:
                self._below[y].add(e)
        self._below = {e: frozenset(v) for e, v in self._below.items()}
        self.covers: tuple = tuple(
            (a, b)
            for a in self.elements
            for b in self._sorted(self._above[a])
            if not any(b in self._above[c] for c in self._above[a])
        )

    def _sorted(self, items: Iterable[Hashable]) -> list:
        return sorted(items, key=self._pos.__getitem__)

    def __contains__(self, x: object) -> bool:
        return x in self._pos

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __repr__(self) -> str:
        return f"FinPoset({len(self.elements)} elements, {len(self.covers)} covers)"

    def index(self, x: Hashable) -> int:
        self._require(x)
        return self._pos[x]

    def _require(self, x: Hashable) -> None:
        if x not in self._pos:
            raise PosetError(f"unknown element {x!r}")

    def lt(self, a: Hashable, b: Hashable) -> bool:
        return b in self._above[a]

    def leq(self, a: Hashable, b: Hashable) -> bool:
        return a == b or b in self._above[a]

    def down_set(self, x: Hashable) -> frozenset:
        self._require(x)
        return self._below[x] | {x}

    def up_set(self, x: Hashable) -> frozenset:
        self._require(x)
        return self._above[x] | {x}

    def strictly_below(self, x: Hashable) -> frozenset:
        self._require(x)
        return self._below[x]

    def strictly_above(self, x: Hashable) -> frozenset:
        self._require(x)
        return self._above[x]

    def minimal(self) -> list:
        return [e for e in self.elements if not self._below[e]]

    def maximal(self) -> list:
        return [e for e in self.elements if not self._above[e]]

    def linear_extension(self) -> list:
        return sorted(self.elements, key=lambda e: (len(self._below[e]), self._pos[e]))

    def subposet(self, keep: Iterable[Hashable]) -> FinPoset:
        keep = set(keep)
        elems = [e for e in self.elements if e in keep]
        return FinPoset(elems, [(a, b) for a in elems for b in self._above[a] if b in keep])

    def interval_open(self, a: Hashable, b: Hashable) -> FinPoset:
        return self.subposet(self._above[a] & self._below[b])

    def opposite(self) -> FinPoset:
        return FinPoset(self.elements, [(b, a) for a, b in self.covers])

    def is_down_closed(self, s: Iterable[Hashable]) -> bool:
        s = set(s)
        return all(self._below[x] <= s for x in s)

    def down_closure(self, s: Iterable[Hashable]) -> frozenset:
        out = set()
        for x in s:
            out |= self.down_set(x)
        return frozenset(out)

    def chains(self) -> Iterator[tuple]:
        """Nonempty strict chains ``x0 < ... < xk``, in a deterministic order."""
        order = self.linear_extension()

        def grow(chain):
            yield chain
            last = chain[-1]
            for y in order:
                if y in self._above[last]:
                    yield from grow(chain + (y,))

        for x in order:
            yield from grow((x,))

    def height(self) -> int:
        """Length (number of elements) of a longest chain."""
        best: dict = {}
        for x in self.linear_extension():
            best[x] = 1 + max((best[y] for y in self._below[x]), default=0)
        return max(best.values(), default=0)

    def rank_function(self) -> dict | None:
        """Grading with minimal elements at 0 when every cover raises rank by one."""
        r: dict = {}
        for x in self.linear_extension():
            lows = {r[a] for a, b in self.covers if b == x}
            if len(lows) > 1:
                return None
            r[x] = lows.pop() + 1 if lows else 0
        return r

    def structure(self) -> tuple:
        return self.elements, self.covers

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, FinPoset):
            return NotImplemented
        return set(self.elements) == set(other.elements) and set(self.covers) == set(other.covers)

    def __hash__(self) -> int:
        return hash((frozenset(self.elements), frozenset(self.covers)))


def chain_poset(n: int) -> FinPoset:
    """``[n] = {0 < 1 < ... < n}``."""
    return FinPoset(range(n + 1), [(k, k + 1) for k in range(n)])


def antichain(elements: Iterable[Hashable]) -> FinPoset:
    return FinPoset(elements)


def with_bottom(p: FinPoset, bottom: Hashable = "0^") -> FinPoset:
    if bottom in p:
        raise PosetError(f"{bottom!r} is already an element")
    return FinPoset((bottom,) + p.elements, [(bottom, x) for x in p.minimal()] + list(p.covers))


def join_poset(p: FinPoset, q: FinPoset) -> FinPoset:
    """``P * Q``: ``P``, ``P x Q``, ``Q`` with ``a < (a, b) > b`` and product order in the middle.

    Elements are tagged ``("L", a)``, ``("J", a, b)``, ``("R", b)``.
    """
    elems = [("L", a) for a in p] + [("J", a, b) for a in p for b in q] + [("R", b) for b in q]
    rel = [(("L", a), ("L", c)) for a, c in p.covers] + [(("R", b), ("R", d)) for b, d in q.covers]
    for a in p:
        for b in q:
            rel.append((("L", a), ("J", a, b)))
            rel.append((("R", b), ("J", a, b)))
            rel.extend((("J", a, b), ("J", c, b)) for x, c in p.covers if x == a)
            rel.extend((("J", a, b), ("J", a, d)) for y, d in q.covers if y == b)
    return FinPoset(elems, rel)


def product_poset(p: FinPoset, q: FinPoset) -> FinPoset:
    elems = [(a, b) for a in p for b in q]
    rel = [((a, b), (c, b)) for a, c in p.covers for b in q] + [((a, b), (a, d)) for a in p for b, d in q.covers]
    return FinPoset(elems, rel)


def order_complex(p: FinPoset) -> FinSimpSet:
    """Simplicial set of strict chains; cells keyed by chain tuples."""
    by_len: dict[int, list] = {}
    for ch in p.chains():
        by_len.setdefault(len(ch), []).append(ch)
    levels = [by_len.get(k + 1, []) for k in range(max(by_len, default=0))]
    return build(levels, lambda ch, i: (identity(len(ch) - 2), ch[:i] + ch[i + 1 :]))


def poset_from_complex_faces(x: FinSimpSet) -> FinPoset:
    """Face relation among the nondegenerate cells of ``x``."""
    rel = []
    for c in x.cells():
        rel.extend((f, c) for f in x.boundary_cells(c))
    return FinPoset(list(x.cells()), rel)


# ---------------------------------------------------------------------------
# isomorphism


def _signature(p: FinPoset, x) -> tuple:
    return (
        len(p.strictly_below(x)),
        len(p.strictly_above(x)),
        tuple(sorted(len(p.strictly_below(y)) for y in p.strictly_below(x))),
        tuple(sorted(len(p.strictly_above(y)) for y in p.strictly_above(x))),
    )


def find_poset_isomorphism(p: FinPoset, q: FinPoset) -> dict | None:
    """Order isomorphism ``p -> q`` by invariant-guided backtracking, or ``None``."""
    if len(p) != len(q) or len(p.covers) != len(q.covers):
        return None
    sig_p = {x: _signature(p, x) for x in p}
    sig_q = {y: _signature(q, y) for y in q}
    if sorted(sig_p.values()) != sorted(sig_q.values()):
        return None
    order = p.linear_extension()
    mapping: dict = {}
    used: set = set()

    def ok(x, y) -> bool:
        for a, b in mapping.items():
            if p.lt(a, x) != q.lt(b, y) or p.lt(x, a) != q.lt(y, b):
                return False
        return True

    def go(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        for y in q.elements:
            if y in used or sig_q[y] != sig_p[x] or not ok(x, y):
                continue
            mapping[x] = y
            used.add(y)
            if go(k + 1):
                return True
            del mapping[x]
            used.discard(y)
        return False

    return dict(mapping) if go(0) else None


# ---------------------------------------------------------------------------
# regular-CW necessary condition


@dataclass
class IntervalVerdict:
    element: Hashable
    expected_dim: int
    betti: list[int]
    euler: int
    ok: bool


@dataclass
class CWPosetReport:
    """Homology-sphere test of every lower interval.  Passing is necessary, not sufficient."""

    verdicts: list[IntervalVerdict] = field(default_factory=list)
    necessary_only: bool = True

    @property
    def ok(self) -> bool:
        return all(v.ok for v in self.verdicts)

    @property
    def failures(self) -> list[IntervalVerdict]:
        return [v for v in self.verdicts if not v.ok]


def _is_homology_sphere(betti: list[int], torsion_free: bool, dim: int) -> bool:
    if dim == -1:
        return not betti or all(b == 0 for b in betti)
    want = [0] * max(len(betti), dim + 1)
    if dim == 0:
        want[0] = 2
    else:
        want[0] = 1
        want[dim] = 1
    return torsion_free and (betti + [0] * (len(want) - len(betti))) == want


def cw_poset_necessary_check(p: FinPoset, bottom: Hashable | None = None) -> CWPosetReport:
    """For ``x != 0^``, the open interval ``(0^, x)`` must look like a sphere of dimension ``rank(x) - 2``.

    ``rank`` counts elements on a longest chain from the bottom, so an atom
    has an empty interval (the ``(-1)``-sphere).
    """
    if bottom is None:
        mins = p.minimal()
        if len(mins) != 1:
            raise PosetError("poset needs a least element; adjoin one with with_bottom")
        bottom = mins[0]
    report = CWPosetReport()
    for x in p.linear_extension():
        if x == bottom:
            continue
        inner = p.interval_open(bottom, x)
        dim = inner.height() - 1
        if len(inner) == 0:
            report.verdicts.append(IntervalVerdict(x, -1, [], 0, True))
            continue
        h = homology(order_complex(inner))
        betti = h.betti
        euler = sum((-1) ** k * b for k, b in enumerate(betti))
        ok = _is_homology_sphere(betti, not any(h.torsion), dim)
        report.verdicts.append(IntervalVerdict(x, dim, betti, euler, ok))
    return report


def cw_poset_ok(p: FinPoset) -> bool:
    return cw_poset_necessary_check(p).ok


def element_order(p: FinPoset, items: Sequence[Hashable]) -> list:
    return sorted(items, key=p.index)


def face_poset(x):
    """Poset of strata of a stratified space ordered by closure."""
    from .strat import face_poset as strat_face_poset

    return strat_face_poset(x)
