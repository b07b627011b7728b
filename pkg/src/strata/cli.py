"""Command-line front end: ``strata <command> ...``.

Exit status is 0 when every requested check passes, 1 when a check fails
(the witness goes into the report) and 2 when the input cannot be parsed.
"""

from __future__ import annotations

import argparse
import os
import sys
from collections.abc import Callable, Sequence

from . import fixtures as fx
from . import io as sio
from .acyccat import AcycCat, EnrichedCat, classifying_space, random_acyclic_category
from .homology import homology, reduced_betti
from .morse import (
    MorseError,
    classify_flow,
    flow_category,
    height_matching,
    hexagon_homs,
    morse_complex,
    two_cell_circle,
    validate_matching,
)
from .poset import find_poset_isomorphism, join_poset
from .simpset import FinSimpSet, boundary_simplex, circle, join, product, sphere0, standard_simplex
from .strat import (
    StratError,
    StratSpace,
    check_conditions,
    cone_strat,
    face_poset,
    implications_harness,
    join_strat,
    simplicial_stratification,
)

Check = dict


def check(name: str, ok: bool, witness: object = None) -> Check:
    out = {"name": name, "ok": bool(ok)}
    if not ok and witness is not None:
        out["witness"] = sio.jsonable(witness)
    return out


# ---------------------------------------------------------------------------
# fixtures


SPACES: dict[str, Callable[[], FinSimpSet]] = {
    "hourglass": fx.hourglass,
    "tetra-boundary": fx.tetra_boundary,
    "circle": lambda: circle(3),
    "sphere0": sphere0,
    "delta2": lambda: standard_simplex(2),
    "torus": lambda: product(circle(3), circle(3)),
    "triangle-boundary": lambda: boundary_simplex(2),
}

STRATS: dict[str, Callable[[], StratSpace]] = {
    "antichain": lambda: StratSpace(*fx.antichain_edge_labels(), name="antichain"),
    "v-edge": lambda: StratSpace(*fx.v_edge_labels(), name="v-edge"),
    "vertex-plus-triangle": lambda: StratSpace(*fx.vertex_plus_open_triangle(), name="vertex-plus-triangle"),
}


def category_fixtures() -> dict:
    cats: dict = dict(fx.named_categories())
    cats["suspension"] = fx.suspension_category(3)
    return cats


def fixture_names() -> list[str]:
    return sorted(set(category_fixtures()) | set(SPACES) | set(STRATS))


def load_category(args) -> AcycCat | EnrichedCat:
    if getattr(args, "category", None):
        return sio.category_from_json(sio.load_json(args.category))
    name = getattr(args, "fixture", None) or "fig1"
    cats = category_fixtures()
    if name not in cats:
        raise sio.FormatError(f"unknown category fixture {name!r} (choose from {sorted(cats)})")
    return cats[name]


def load_space(args, attr: str = "space", fixture: str | None = None) -> FinSimpSet:
    path = getattr(args, attr, None)
    if path:
        data = sio.load_json(path)
        if data.get("kind") == "strat":
            return sio.strat_from_json(data).space
        return sio.simpset_from_json(data)
    name = fixture if fixture is not None else getattr(args, "fixture", None)
    if name in SPACES:
        return SPACES[name]()
    if name in STRATS:
        return STRATS[name]().space
    if name in category_fixtures():
        return classifying_space(category_fixtures()[name])
    raise sio.FormatError(f"unknown space {name!r} (choose from {fixture_names()})")


def load_strat(args) -> StratSpace:
    if getattr(args, "strat", None):
        return sio.strat_from_json(sio.load_json(args.strat))
    name = getattr(args, "fixture", None) or "antichain"
    if name in STRATS:
        return STRATS[name]()
    return simplicial_stratification(load_space(args, fixture=name))


def require_discrete(c) -> AcycCat:
    if not isinstance(c, AcycCat):
        raise sio.FormatError("this command needs a category with explicit morphisms")
    return c


def seed_of(args) -> int:
    env = os.environ.get("STRATA_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise sio.FormatError(f"STRATA_SEED must be an integer, got {env!r}") from None
    return args.seed


# ---------------------------------------------------------------------------
# commands: each returns (payload, checks)


def cmd_nerve(args):
    c = load_category(args)
    checks = [check(v.name, v.ok, v.witness) for v in c.validate().verdicts]
    if not all(k["ok"] for k in checks):
        return {"category": getattr(c, "name", "")}, checks
    x = classifying_space(c)
    payload = {"f_vector": x.f_vector, "euler_characteristic": x.euler_characteristic()}
    if args.cells:
        payload["cells"] = [sio.cell_ref(x, cell) for cell in x.cells()]
    return payload, checks


def cmd_classify(args):
    from .stellar import unstable_stratification, verify_partition

    c = load_category(args)
    if isinstance(c, EnrichedCat):
        raise sio.FormatError("classify needs a category with explicit morphisms; use 'homology' for enriched fixtures")
    bad = c.validate().failures()
    if bad:
        return {}, [check(v.name, v.ok, v.witness) for v in bad]
    strat = unstable_stratification(c)
    rep = check_conditions(strat)
    sizes = {sio.label_str(lab): len(strat.stratum(lab)) for lab in strat.image}
    checks = [check("stratification", rep.stratification, rep.failures()[:1] or None)]
    checks += [check(k.name, k.ok, k.witness) for k in verify_partition(c, strat).checks]
    payload = {"f_vector": strat.space.f_vector, "strata": sizes, "homology": homology(strat.space).as_dict()}
    return payload, checks


def cmd_stratify(args):
    from .stellar import stable_stratification, unstable_stratification

    if args.mode == "simplicial":
        strat = simplicial_stratification(load_space(args))
    else:
        c = require_discrete(load_category(args))
        strat = unstable_stratification(c) if args.mode == "unstable" else stable_stratification(c)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(sio.export(strat))
    rep = check_conditions(strat)
    payload = {"mode": args.mode, "strata": {sio.label_str(lab): len(strat.stratum(lab)) for lab in strat.image}}
    return payload, [check("stratification", rep.stratification, rep.failures()[:1] or None)]


def cmd_check_strat(args):
    strat = load_strat(args)
    rep = check_conditions(strat)
    checks = [check(n, rep.conditions[n].ok, rep.conditions[n].witness) for n in ("continuous", "open")]
    checks += [check(f"connected {lab!r}", v.ok, v.witness) for lab, v in rep.connected.items()]
    checks += [check(f"locally_closed {lab!r}", v.ok, v.witness) for lab, v in rep.locally_closed.items()]
    info = {n: rep.conditions[n].ok for n in rep.conditions}
    return {"conditions": info, "stratification": rep.stratification}, checks


def cmd_implications(args):
    rep = implications_harness(samples=args.samples, seed=seed_of(args), max_cells=args.max_cells)
    payload = {"samples": rep.samples, "holds_counts": rep.counts, "seed": seed_of(args)}
    return payload, [check("implications hold on every sample", rep.ok, rep.violations[:1] or None)]


def cmd_join(args):
    a = load_space(args, "left", args.left_fixture)
    b = load_space(args, "right", args.right_fixture)
    j = join(a, b)
    ra, rb, rj = (x.euler_characteristic() - 1 for x in (a, b, j))
    checks = [check("reduced Euler characteristic is multiplicative up to sign", rj == -ra * rb, (ra, rb, rj))]
    try:
        sa, sb = simplicial_stratification(a), simplicial_stratification(b)
        fp = face_poset(join_strat(sa, sb))
        iso = find_poset_isomorphism(fp, join_poset(face_poset(sa), face_poset(sb)))
        checks.append(check("face poset of the join is the join of face posets", iso is not None))
    except StratError as exc:
        checks.append(check("face poset of the join is the join of face posets", False, str(exc)))
    return {"f_vector": j.f_vector, "homology": homology(j).as_dict()}, checks


def cmd_cone(args):
    x = load_space(args)
    strat = cone_strat(simplicial_stratification(x))
    rep = check_conditions(strat)
    rb = reduced_betti(strat.space)
    checks = [check("cone is acyclic", not any(rb), rb), check("stratification", rep.stratification, rep.failures()[:1] or None)]
    return {"f_vector": strat.space.f_vector, "strata": len(strat.image)}, checks


def cmd_stellar(args):
    from .stellar import stellar_report

    c = require_discrete(load_category(args))
    objs = [args.object] if args.object else list(c.objects)
    payload, checks = {"objects": {}}, []
    for x in objs:
        if x not in c.objects:
            raise sio.FormatError(f"unknown object {x!r}")
        rep = stellar_report(c, x)
        checks += [check(f"{x}: {name}", ok) for name, ok in rep.pop("checks")]
        payload["objects"][str(x)] = sio.encode(rep)
    return payload, checks


def cmd_roundtrip(args):
    from .stellar import roundtrip

    cats = []
    if args.random:
        import random

        rng = random.Random(seed_of(args))
        cats = [random_acyclic_category(rng, max_objects=5, max_hom=3) for _ in range(args.random)]
    else:
        cats = [require_discrete(load_category(args))]
    checks, isos = [], []
    for i, c in enumerate(cats):
        rep = roundtrip(c)
        label = c.name or f"sample {i}"
        checks.append(check(f"{label}: face category isomorphic to input", rep.ok, rep.witness or (rep.stellar.failures()[:1] or None)))
        if rep.isomorphism is not None and not args.random:
            isos.append({k: {str(a): sio.encode(b) for a, b in v.items()} for k, v in rep.isomorphism.items()})
    payload = {"categories": len(cats)}
    if isos:
        payload["isomorphism"] = isos[0]
    return payload, checks


def cmd_exit(args):
    from .exitpath import build_chart, cover, exhaustive_horns, verify_chart
    from .stellar import unstable_stratification

    c = require_discrete(load_category(args))
    if args.exit_cmd == "chart":
        objs = [args.object] if args.object else list(c.objects)
        payload, checks = {"charts": {}}, []
        for x in objs:
            if x not in c.objects:
                raise sio.FormatError(f"unknown object {x!r}")
            ch = build_chart(c, x)
            image = sorted(ch.open_image())
            payload["charts"][str(x)] = {"image": [sio.cell_ref(ch.bc, cell) for cell in image], "size": len(image)}
            checks += [check(f"{x}: {k.name}", k.ok, k.witness) for k in verify_chart(ch).checks]
        return payload, checks
    if args.exit_cmd == "cover":
        rep = cover(c)
        payload = {"objects": len(rep.charts), "covered": len(rep.covered)}
        return payload, [check(k.name, k.ok, k.witness) for k in rep.report.checks]
    strat = unstable_stratification(c)
    rep = exhaustive_horns(strat, args.max_dim)
    payload = {"horns": rep.total, "filled": rep.filled, "by_dim": {str(k): v for k, v in rep.by_dim.items()}}
    wit = None
    if rep.unfilled:
        h = rep.unfilled[0]
        wit = {"n": h.n, "k": h.k, "faces": {str(i): sio.encode(f) for i, f in h.faces.items()}}
    return payload, [check("every inner horn fills", rep.ok, wit)]


def _morse_input(args):
    homs, comp = {}, {}
    if args.matching:
        c, m = sio.matching_from_json(sio.load_json(args.matching))
    else:
        name = args.fixture or "height"
        if name in ("height", "hexagon"):
            c, m = height_matching()
            if name == "hexagon":
                homs, comp = hexagon_homs()
        elif name == "circle":
            c, m = two_cell_circle()
        else:
            raise sio.FormatError(f"unknown Morse fixture {name!r} (height, hexagon, circle)")
    if args.homs:
        homs, comp = sio.flowhoms_from_json(sio.load_json(args.homs))
    return c, m, homs, comp


def cmd_morse(args):
    c, m, homs, comp = _morse_input(args)
    problems = c.validate()
    if problems:
        return {"complex": c.name}, [check("regular face poset", False, problems[0])]
    rep = validate_matching(c, m)
    checks = [check("matching is acyclic", rep.acyclic, rep.witness)]
    payload: dict = {"critical": sio.encode(tuple(rep.critical)), "pairs": rep.pairs}
    if not rep.acyclic or args.morse_cmd == "validate":
        return payload, checks
    if args.morse_cmd == "complex":
        mc = morse_complex(c, m)
        payload.update(mc.as_dict())
        checks.append(check("Morse homology equals cellular homology", True))
        return payload, checks
    fc = flow_category(c, m, homs, comp)
    if args.morse_cmd == "flow":
        payload["category"] = sio.category_to_json(fc)
        payload["hom_sizes"] = {f"{a}->{b}": len(fc.nonid_hom(a, b)) for a in fc.objects for b in fc.objects if fc.nonid_hom(a, b)}
        checks.append(check("flow category is acyclic", fc.validate().ok))
        return payload, checks
    fr = classify_flow(fc)
    payload.update(fr.as_dict())
    checks.append(check("one stratum per critical cell", fr.strata == fr.critical, (fr.strata, fr.critical)))
    checks += [check(k.name, k.ok, k.witness) for k in fr.face_category.checks]
    checks.append(check("face poset of the strata matches the objects", fr.face_poset_iso is not None))
    return payload, checks


def cmd_homology(args):
    if args.space:
        x = load_space(args)
    elif args.category:
        x = classifying_space(load_category(args))
    else:
        x = load_space(args, fixture=args.fixture or "fig1")
    rep = homology(x, backend=args.backend)
    return {"f_vector": x.f_vector, "euler_characteristic": x.euler_characteristic(), **rep.as_dict()}, []


def _export_target(args):
    if args.strat:
        return load_strat(args)
    if args.category:
        c = load_category(args)
        return c if args.format == "json" and not args.nerve else classifying_space(c)
    if args.space:
        return load_space(args)
    name = args.fixture or "fig1"
    if name in STRATS:
        return STRATS[name]()
    if name in category_fixtures() and args.format == "json" and not args.nerve:
        c = category_fixtures()[name]
        if isinstance(c, AcycCat):
            return c
    return load_space(args, fixture=name)


# ---------------------------------------------------------------------------
# output


def render(payload: dict, checks: list[Check], fmt: str) -> str:
    ok = all(k["ok"] for k in checks)
    if fmt == "tap":
        lines = [f"1..{len(checks)}"]
        for i, k in enumerate(checks, 1):
            line = f"{'ok' if k['ok'] else 'not ok'} {i} - {k['name']}"
            if "witness" in k:
                line += f" # witness {sio.label_str(k['witness'])}"
            lines.append(line)
        return "\n".join(lines) + "\n"
    return sio.dumps({"ok": ok, "checks": checks, **payload})


def summary(checks: list[Check]) -> str:
    bad = [k for k in checks if not k["ok"]]
    return f"{len(checks) - len(bad)}/{len(checks)} checks passed" + (f"; first failure: {bad[0]['name']}" if bad else "")


def build_parser() -> argparse.ArgumentParser:
    def common_options(parser, default):
        parser.add_argument("--seed", type=int, default=default(0), help="seed for randomized harnesses (STRATA_SEED wins)")
        parser.add_argument("--format", choices=("json", "tap", "off"), default=default("json"))
        parser.add_argument("--out", default=default(None), help="write the report (or export) here instead of standard output")
        parser.add_argument("-v", "--verbose", action="store_true", default=default(False))

    # the options are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common_options(common, lambda v: argparse.SUPPRESS)
    p = argparse.ArgumentParser(prog="strata", description="Classifying spaces of acyclic categories and their stratifications.")
    common_options(p, lambda v: v)
    sub = p.add_subparsers(dest="command", required=True)

    def with_category(sp):
        sp.add_argument("--category", help="category JSON file")
        sp.add_argument("--fixture", help=f"named fixture: {', '.join(fixture_names())}")
        return sp

    sp = with_category(sub.add_parser("nerve", help="classifying space of a category", parents=[common]))
    sp.add_argument("--cells", action="store_true", help="list every cell")
    with_category(sub.add_parser("classify", help="unstable stratification of BC with checks", parents=[common]))
    sp = with_category(sub.add_parser("stratify", help="build a stratification", parents=[common]))
    sp.add_argument("--mode", choices=("unstable", "stable", "simplicial"), default="unstable")
    sp.add_argument("--space", help="simplicial set JSON (simplicial mode)")
    sp.add_argument("--emit", help="write the stratified space JSON here")
    sp = sub.add_parser("check-strat", help="check the stratification conditions", parents=[common])
    sp.add_argument("--strat", help="stratified space JSON")
    sp.add_argument("--fixture")
    sp = sub.add_parser("implications", help="random harness for the implications between conditions", parents=[common])
    sp.add_argument("--samples", type=int, default=1000)
    sp.add_argument("--max-cells", type=int, default=12)
    sp = sub.add_parser("join", help="join of two spaces", parents=[common])
    sp.add_argument("--left")
    sp.add_argument("--right")
    sp.add_argument("--left-fixture", default="sphere0")
    sp.add_argument("--right-fixture", default="sphere0")
    sp = sub.add_parser("cone", help="cone on a space", parents=[common])
    sp.add_argument("--space")
    sp.add_argument("--fixture", default="circle")
    sp = with_category(sub.add_parser("stellar", help="lower stars of objects", parents=[common]))
    sp.add_argument("--object")
    sp = with_category(sub.add_parser("roundtrip", help="face category of BC versus the input", parents=[common]))
    sp.add_argument("--random", type=int, default=0, help="check this many seeded random categories instead")
    sp = sub.add_parser("exit", help="conical charts and horn filling", parents=[common])
    esub = sp.add_subparsers(dest="exit_cmd", required=True)
    e = with_category(esub.add_parser("chart", parents=[common]))
    e.add_argument("--object")
    with_category(esub.add_parser("cover", parents=[common]))
    e = with_category(esub.add_parser("horns", parents=[common]))
    e.add_argument("--max-dim", type=int, default=3)
    sp = sub.add_parser("morse", help="discrete Morse pipeline", parents=[common])
    msub = sp.add_subparsers(dest="morse_cmd", required=True)
    for name in ("validate", "complex", "flow", "classify"):
        m = msub.add_parser(name, parents=[common])
        m.add_argument("--matching", help="matching JSON")
        m.add_argument("--homs", help="supplied hom posets JSON")
        m.add_argument("--fixture", help="height, hexagon or circle")
    sp = with_category(sub.add_parser("homology", help="integral homology", parents=[common]))
    sp.add_argument("--space")
    sp.add_argument("--backend", choices=("compiled", "python"))
    sp = with_category(sub.add_parser("export", help="write JSON or OFF", parents=[common]))
    sp.add_argument("--space")
    sp.add_argument("--strat")
    sp.add_argument("--nerve", action="store_true", help="export BC rather than the category")
    return p


COMMANDS = {
    "nerve": cmd_nerve,
    "classify": cmd_classify,
    "stratify": cmd_stratify,
    "check-strat": cmd_check_strat,
    "implications": cmd_implications,
    "join": cmd_join,
    "cone": cmd_cone,
    "stellar": cmd_stellar,
    "roundtrip": cmd_roundtrip,
    "exit": cmd_exit,
    "morse": cmd_morse,
    "homology": cmd_homology,
}


def _write(text: str, path: str | None) -> None:
    if path:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.command == "export":
            if args.format == "tap":
                raise sio.FormatError("export writes json or off")
            _write(sio.export(_export_target(args), args.format), args.out)
            return 0
        if args.format == "off":
            raise sio.FormatError("off output is only available from 'export'")
        payload, checks = COMMANDS[args.command](args)
    except (sio.FormatError, MorseError, StratError) as exc:
        print(f"strata: error: {exc}", file=sys.stderr)
        if isinstance(exc, MorseError) and "acyclic" in str(exc):
            return 1
        return 2
    except ValueError as exc:
        print(f"strata: error: {exc}", file=sys.stderr)
        return 2
    text = render(payload, checks, args.format)
    if args.out:
        _write(text, args.out)
        print(summary(checks))
    else:
        _write(text, None)
    if args.verbose:
        print(summary(checks), file=sys.stderr)
    return 0 if all(k["ok"] for k in checks) else 1


if __name__ == "__main__":
    sys.exit(main())
