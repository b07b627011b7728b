"""JSON readers and writers, and OFF export for low-dimensional spaces.

Hashable keys are tuples throughout the library; JSON carries them as
lists, and readers turn every list back into a tuple.
"""

from __future__ import annotations

import json
from collections.abc import Hashable
from fractions import Fraction
from pathlib import Path

from .acyccat import AcycCat
from .morse import Matching, RegComplex, matching, reg_from_cells, reg_from_simplices
from .poset import FinPoset
from .simpset import FinSimpSet, from_simplicial_complex
from .strat import StratSpace


class FormatError(ValueError):
    """Input that does not parse against the expected layout."""


def encode(x):
    if isinstance(x, tuple):
        return [encode(v) for v in x]
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, dict):
        return {str(k): encode(v) for k, v in x.items()}
    return x


def decode(x):
    if isinstance(x, list):
        return tuple(decode(v) for v in x)
    return x


def jsonable(x):
    """Best-effort JSON form of a witness: containers recurse, other objects become ``repr``."""
    if isinstance(x, (tuple, list, set, frozenset)):
        items = sorted(x, key=repr) if isinstance(x, (set, frozenset)) else x
        return [jsonable(v) for v in items]
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if x is None or isinstance(x, (str, int, float, bool)):
        return x
    if isinstance(x, Fraction):
        return str(x)
    return repr(x)


def dumps(obj: dict) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def load_json(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise FormatError(f"{path}: expected a JSON object")
    return data


def _need(data: dict, *names: str) -> None:
    for n in names:
        if n not in data:
            raise FormatError(f"missing field {n!r}")


# ---------------------------------------------------------------------------
# simplicial sets


def simpset_to_json(x: FinSimpSet) -> dict:
    meta = {k: encode(v) for k, v in x.meta.items() if not k.startswith("_") and isinstance(v, (str, int, tuple))}
    return {
        "kind": "simpset",
        "faces": [[[[list(s), t] for s, t in fs] for fs in level] for level in x.faces],
        "keys": None if x.keys is None else [[encode(k) for k in level] for level in x.keys],
        "names": [[c[0], c[1], n] for c, n in sorted(x.names.items())],
        "meta": meta,
    }


def simpset_from_json(data: dict) -> FinSimpSet:
    if "simplices" in data:
        return from_simplicial_complex(decode(s) for s in data["simplices"])
    _need(data, "faces")
    try:
        faces = [[[(tuple(s), int(t)) for s, t in fs] for fs in level] for level in data["faces"]]
        keys = data.get("keys")
        keys = None if keys is None else [[decode(k) for k in level] for level in keys]
        names = {(int(d), int(i)): n for d, i, n in data.get("names", [])}
        meta = {k: decode(v) for k, v in data.get("meta", {}).items()}
        return FinSimpSet(faces, keys, names, meta)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad simplicial set: {exc}") from exc


# ---------------------------------------------------------------------------
# posets and categories


def poset_to_json(p: FinPoset) -> dict:
    return {"kind": "poset", "elements": [encode(e) for e in p.elements], "covers": [encode(c) for c in p.covers]}


def poset_from_json(data: dict) -> FinPoset:
    _need(data, "elements")
    rel = data.get("covers", data.get("relations", []))
    try:
        return FinPoset([decode(e) for e in data["elements"]], [tuple(decode(r)) for r in rel])
    except ValueError as exc:
        raise FormatError(f"bad poset: {exc}") from exc


def category_to_json(c: AcycCat) -> dict:
    return {
        "kind": "category",
        "name": c.name,
        "objects": [encode(x) for x in c.objects],
        "morphisms": [[encode(m), encode(s), encode(t)] for m, (s, t) in c.morphisms.items()],
        "composition": [[encode(g), encode(f), encode(h)] for (g, f), h in c.composition.items()],
        "hom_order": None if c.hom_order is None else [encode(r) for r in c.hom_order],
    }


def category_from_json(data: dict) -> AcycCat:
    _need(data, "objects", "morphisms")
    try:
        mors = {decode(m): (decode(s), decode(t)) for m, s, t in data["morphisms"]}
        comp = {(decode(g), decode(f)): decode(h) for g, f, h in data.get("composition", [])}
        order = data.get("hom_order")
        order = None if order is None else [tuple(decode(r)) for r in order]
        return AcycCat([decode(x) for x in data["objects"]], mors, comp, hom_order=order, name=data.get("name", ""))
    except (TypeError, ValueError) as exc:
        raise FormatError(f"bad category: {exc}") from exc


# ---------------------------------------------------------------------------
# stratified spaces


def strat_to_json(x: StratSpace) -> dict:
    return {
        "kind": "strat",
        "name": x.name,
        "space": simpset_to_json(x.space),
        "poset": poset_to_json(x.poset),
        "labels": [[c[0], c[1], encode(lab)] for c, lab in sorted(x.labels.items())],
    }


def strat_from_json(data: dict) -> StratSpace:
    """Cells are given as ``[dim, id, label]``, or as ``[key, label]`` keyed by cell key."""
    _need(data, "space", "poset", "labels")
    space = simpset_from_json(data["space"])
    poset = poset_from_json(data["poset"])
    labels = {}
    try:
        for row in data["labels"]:
            if len(row) == 3:
                labels[(int(row[0]), int(row[1]))] = decode(row[2])
            else:
                labels[space.cell_of(decode(row[0]))] = decode(row[1])
        return StratSpace(space, poset, labels, name=data.get("name", ""))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad stratified space: {exc}") from exc


# ---------------------------------------------------------------------------
# Morse data


def regcomplex_to_json(c: RegComplex) -> dict:
    if c.signed and all(isinstance(x, tuple) for x in c.cells):
        top = [x for x in c.cells if not c.cofaces[x]]
        return {"simplices": [list(x) for x in top]}
    return {"cells": {str(x): c.dims[x] for x in c.cells}, "faces": {str(x): [str(f) for f in c.faces[x]] for x in c.cells if c.faces[x]}}


def regcomplex_from_json(data: dict) -> RegComplex:
    if "simplices" in data:
        return reg_from_simplices(decode(s) for s in data["simplices"])
    _need(data, "cells")
    return reg_from_cells({k: int(v) for k, v in data["cells"].items()}, {k: list(v) for k, v in data.get("faces", {}).items()})


def matching_to_json(c: RegComplex, m: Matching) -> dict:
    return {"kind": "matching", "complex": regcomplex_to_json(c), "pairs": [[encode(a), encode(b)] for a, b in m.pairs]}


def matching_from_json(data: dict) -> tuple[RegComplex, Matching]:
    """Pairs may be given directly, or through a discrete Morse function ``[[cell, value], ...]``."""
    from .morse import morse_function_to_matching

    _need(data, "complex")
    c = regcomplex_from_json(data["complex"])
    if "function" in data:
        f = {decode(k): Fraction(v) for k, v in data["function"]}
        return c, morse_function_to_matching(c, f)
    return c, matching(c, [(decode(a), decode(b)) for a, b in data.get("pairs", [])])


def flowhoms_to_json(homs: dict, composition: dict) -> dict:
    return {
        "kind": "flowhoms",
        "homs": [
            {"lo": encode(lo), "hi": encode(hi), "elements": [encode(e) for e in d["elements"]], "order": [encode(tuple(r)) for r in d.get("order", [])]}
            for (lo, hi), d in homs.items()
        ],
        "composition": [[encode(g), encode(f), encode(h)] for (g, f), h in composition.items()],
    }


def flowhoms_from_json(data: dict) -> tuple[dict, dict]:
    _need(data, "homs")
    homs = {}
    for row in data["homs"]:
        homs[(decode(row["lo"]), decode(row["hi"]))] = {
            "elements": [decode(e) for e in row["elements"]],
            "order": [tuple(decode(r)) for r in row.get("order", [])],
        }
    comp = {(decode(g), decode(f)): decode(h) for g, f, h in data.get("composition", [])}
    return homs, comp


def read_any(path: str | Path) -> object:
    data = load_json(path)
    kind = data.get("kind")
    readers = {
        "simpset": simpset_from_json,
        "poset": poset_from_json,
        "category": category_from_json,
        "strat": strat_from_json,
        "matching": matching_from_json,
        "flowhoms": flowhoms_from_json,
    }
    if kind not in readers:
        raise FormatError(f"{path}: unknown kind {kind!r}")
    return readers[kind](data)


# ---------------------------------------------------------------------------
# OFF


def _moment(t: float) -> tuple[float, float, float]:
    return (t, t * t, t * t * t)


def to_off(x: FinSimpSet | StratSpace) -> str:
    """Flatten cells of dimension at most three into an OFF surface.

    Each vertex sits on the moment curve.  A triangle whose vertices repeat,
    or whose vertex set is shared with another triangle, is drawn as a fan
    around its own barycentre (lifted slightly so that siblings separate).
    Edges that are not a side of any drawn triangle become two-vertex faces;
    3-simplices contribute their boundary triangles.
    """
    space = x.space if isinstance(x, StratSpace) else x
    if space.dim > 3:
        raise ValueError(f"OFF export supports dimension at most 3, got {space.dim}")
    nv = space.f_vector[0] if space.dim >= 0 else 0
    denom = max(nv - 1, 1)
    coords = [_moment(k / denom) for k in range(nv)]
    tri_sets = [frozenset(space.vertices(c)) for c in space.cells(2)]
    faces: list[tuple[int, ...]] = []
    seen: set = set()

    def add(face: tuple[int, ...]) -> None:
        key = tuple(sorted(face))
        if len(set(face)) == len(face) and key not in seen:
            seen.add(key)
            faces.append(face)

    sibling: dict = {}
    for c in space.cells(2):
        vs = space.vertices(c)
        fs = frozenset(vs)
        if len(fs) == 3 and tri_sets.count(fs) == 1:
            add(tuple(vs))
            continue
        k = sibling.get(fs, 0)
        sibling[fs] = k + 1
        cx = [sum(coords[v][i] for v in vs) / 3 for i in range(3)]
        cx[2] += 0.1 * (k + 1)
        b = len(coords)
        coords.append(tuple(cx))
        for i, j in ((0, 1), (1, 2), (0, 2)):
            add((vs[i], vs[j], b))
    for c in space.cells(3):
        vs = space.vertices(c)
        for drop in range(4):
            add(tuple(v for i, v in enumerate(vs) if i != drop))
    covered = {frozenset(p) for f in faces if len(f) == 3 for p in ((f[0], f[1]), (f[1], f[2]), (f[0], f[2]))}
    for c in space.cells(1):
        vs = space.vertices(c)
        if frozenset(vs) not in covered:
            add(tuple(vs))
    lines = ["OFF", f"{len(coords)} {len(faces)} 0"]
    lines += [" ".join(f"{v:.6f}" for v in p) for p in coords]
    lines += [" ".join(str(v) for v in (len(f),) + f) for f in faces]
    return "\n".join(lines) + "\n"


def export(x: object, fmt: str = "json") -> str:
    if fmt == "off":
        if not isinstance(x, (FinSimpSet, StratSpace)):
            raise ValueError("OFF export needs a space")
        return to_off(x)
    writers = [
        (StratSpace, strat_to_json),
        (FinSimpSet, simpset_to_json),
        (FinPoset, poset_to_json),
        (AcycCat, category_to_json),
    ]
    for cls, fn in writers:
        if isinstance(x, cls):
            return dumps(fn(x))
    raise ValueError(f"cannot export {type(x).__name__}")


def cell_ref(x: FinSimpSet, cell: tuple) -> dict:
    """A cell named by id and, when present, by key."""
    out: dict = {"cell": list(cell)}
    if x.keys is not None:
        out["key"] = encode(x.key(cell))
    return out


def label_str(lab: Hashable) -> str:
    return json.dumps(encode(lab))
