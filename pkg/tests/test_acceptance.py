"""Acceptance criteria, one test each.

Every check records a ``criterion N PASS|FAIL`` line; the conftest hook
prints them at the end of the pytest run.  Run this file directly to get
the same lines without pytest.
"""

from __future__ import annotations

import random
import sys
import time
from math import comb
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from strata.acyccat import AcycCat, chain_category, iso_check, random_acyclic_category  # noqa: E402
from strata.exitpath import Horn, build_chart, cover, exhaustive_horns, horn_fill, verify_chart  # noqa: E402
from strata.fixtures import (  # noqa: E402
    antichain_edge_labels,
    figure_one,
    named_categories,
    suspension_category,
    vertex_plus_open_triangle,
)
from strata.homology import homology, homology_of_complex  # noqa: E402
from strata.morse import (  # noqa: E402
    classify_flow,
    height_matching,
    hexagon_flow,
    morse_complex,
    random_acyclic_matching,
    random_simplicial_complex,
)
from strata.poset import find_poset_isomorphism, join_poset, order_complex  # noqa: E402
from strata.simpset import find_isomorphism, from_simplicial_complex, sphere0, standard_simplex  # noqa: E402
from strata.stellar import extract_face_category, cylindrical_structure, lower_star, unstable_stratification  # noqa: E402
from strata.stellar import verify_cone, verify_stratum_equals_star  # noqa: E402
from strata.strat import StratSpace, check_conditions, face_poset, implications_harness  # noqa: E402
from strata.strat import join_strat, simplicial_stratification, single_stratum  # noqa: E402

# pinned limits
ROUNDTRIP_SECONDS = 10.0
RANDOM_CATEGORIES = 200
IMPLICATION_SAMPLES = 1000
IMPLICATION_MAX_CELLS = 12
JOIN_PAIRS = 100
MORSE_SAMPLES = 100
MORSE_MAX_CELLS = 50

RESULTS: dict[int, tuple[str, bool, str]] = {}


def record(n: int, title: str, ok: bool, detail: str = "") -> bool:
    RESULTS[n] = (title, bool(ok), detail)
    print(line(n))
    return bool(ok)


def line(n: int) -> str:
    title, ok, detail = RESULTS[n]
    return f"criterion {n:2d} {'PASS' if ok else 'FAIL'}  {title}" + (f"  [{detail}]" if detail else "")


def groups(h) -> str:
    return "(" + ", ".join(h.group(n) for n in range(len(h.betti))) + ")"


def random_categories():
    return [random_acyclic_category(random.Random(s), max_objects=5, max_hom=3) for s in range(RANDOM_CATEGORIES)]


def underlying_discrete(c: AcycCat) -> AcycCat:
    return AcycCat(c.objects, dict(c.morphisms), dict(c.composition), name=c.name)


def fixture_categories() -> dict[str, AcycCat]:
    """Discrete-tier fixtures; an ordered hom is replaced by its underlying set."""
    return {name: underlying_discrete(c) if c.is_poset_enriched() else c for name, c in named_categories().items()}


# ---------------------------------------------------------------------------


def criterion_1() -> bool:
    start = time.perf_counter()
    cats = [figure_one()] + random_categories()
    bad = [i for i, c in enumerate(cats) if iso_check(extract_face_category(cylindrical_structure(c)), c) is None]
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < ROUNDTRIP_SECONDS
    return record(1, "face category of BC recovers C", ok, f"{len(cats)} categories, {len(bad)} mismatches, {elapsed:.2f}s < {ROUNDTRIP_SECONDS:.0f}s")


def criterion_2() -> bool:
    ok = True
    for n in range(5):
        b = chain_category(n).nondegenerate_nerve()
        ok &= b.f_vector == [comb(n + 1, k + 1) for k in range(n + 1)]
        ok &= find_isomorphism(b, standard_simplex(n)) is not None
    s = unstable_stratification(chain_category(2))
    counts = [len(s.stratum(x)) for x in (0, 1, 2)]
    ok &= counts == [1, 2, 4]
    return record(2, "B[n] is the n-simplex for n <= 4", ok, f"strata of B[2]: {counts}")


def criterion_3() -> bool:
    b = suspension_category(3).classifying_space()
    h = homology(b)
    ok = h.betti == [1, 0, 1] and all(not t for t in h.torsion) and b.euler_characteristic() == 2
    return record(3, "suspension category", ok, f"H = {groups(h)}, chi = {b.euler_characteristic()}")


def criterion_4() -> bool:
    rep = implications_harness(IMPLICATION_SAMPLES, seed=0, max_cells=IMPLICATION_MAX_CELLS)
    anti = check_conditions(StratSpace(*antichain_edge_labels()))
    lc = check_conditions(StratSpace(*vertex_plus_open_triangle()))
    anti_ok = not anti.holds("continuous") and anti.conditions["continuous"].witness is not None
    lc_ok = not lc.locally_closed["top"].ok and lc.locally_closed["top"].witness is not None
    ok = rep.ok and rep.samples >= IMPLICATION_SAMPLES and anti_ok and lc_ok
    return record(4, "implications between stratification conditions", ok, f"{rep.samples} samples, {len(rep.violations)} violations, counterexamples witnessed: {anti_ok and lc_ok}")


def random_complex(rng: random.Random):
    n = rng.randint(1, 4)
    facets = [rng.sample(range(n), rng.randint(1, min(n, 3))) for _ in range(rng.randint(1, 3))]
    return from_simplicial_complex(facets)


def criterion_5() -> bool:
    rng = random.Random(5)
    bad = 0
    for _ in range(JOIN_PAIRS):
        a = simplicial_stratification(random_complex(rng))
        b = simplicial_stratification(random_complex(rng))
        j = join_strat(a, b)
        iso = find_poset_isomorphism(face_poset(j), join_poset(face_poset(a), face_poset(b)))
        chi = [s.space.euler_characteristic() - 1 for s in (a, b, j)]
        if iso is None or chi[2] != -chi[0] * chi[1]:
            bad += 1
    h = homology(join_strat(single_stratum(sphere0()), single_stratum(sphere0())).space)
    s1 = h.betti == [1, 1] and all(not t for t in h.torsion)
    return record(5, "join law and S0 * S0", bad == 0 and s1, f"{JOIN_PAIRS} pairs, {bad} failures, H(S0*S0) = {groups(h)}")


def criterion_6() -> bool:
    cats = [figure_one()] + random_categories()
    bad = [i for i, c in enumerate(cats) if not cover(c).ok]
    ch = build_chart(figure_one(), "y")
    six = len(ch.open_image()) == 6 and verify_chart(ch).ok
    return record(6, "conical charts verify and cover BC", not bad and six, f"{len(cats)} categories, {len(bad)} failures, chart at y: {len(ch.open_image())} cells")


def criterion_7() -> bool:
    fig = unstable_stratification(figure_one())
    reps = [exhaustive_horns(unstable_stratification(chain_category(3)), 3), exhaustive_horns(fig, 3)]
    sp = fig.space
    v = sp.cell_of((("x", "y"), ("v",)))
    u1 = sp.cell_of((("y", "z"), ("u1",)))
    filler = horn_fill(fig, Horn(2, 1, {0: (u1, (0, 1)), 2: (v, (0, 1))}))
    pair = sp.cell_of((("x", "y", "z"), ("v", "u1")))
    ok = all(r.ok and r.total > 0 for r in reps) and filler == (pair, (0, 1, 2))
    return record(7, "inner horns fill", ok, f"B[3]: {reps[0].filled}/{reps[0].total}, B(fig1): {reps[1].filled}/{reps[1].total}, composite filler: {filler == (pair, (0, 1, 2))}")


def is_hexagon(x) -> bool:
    """Six vertices, six distinct edges, every vertex of degree two, connected with one loop."""
    edges = {frozenset(x.vertices(e)) for e in x.cells(1)}
    degree = {v: sum(v in e for e in edges) for v in range(x.f_vector[0])}
    return x.f_vector == [6, 6] and len(edges) == 6 and set(degree.values()) == {2} and homology(x).betti == [1, 1]


def criterion_8() -> bool:
    c, m = height_matching()
    crit = m.critical(c)
    mc = morse_complex(c, m)
    fc = hexagon_flow()
    hom = fc.hom_poset("v0", "v1v2v3")
    hex_ok = len(hom) == 6 and is_hexagon(order_complex(hom))
    rep = classify_flow(fc)
    ok = (
        sorted(crit) == [(0,), (1, 2, 3)]
        and mc.homology.betti == [1, 0, 1]
        and hex_ok
        and rep.prismatic == [2, 6, 6]
        and rep.homology.betti == [1, 0, 1]
        and all(not t for t in rep.homology.torsion)
        and rep.strata == 2
        and rep.ok
    )
    return record(8, "Morse pipeline on the tetrahedron boundary", ok, f"critical {crit}, cells {rep.prismatic}, H = {groups(rep.homology)}, strata {rep.strata}")


def criterion_9() -> bool:
    bad, sizes = 0, []
    for seed in range(MORSE_SAMPLES):
        rng = random.Random(seed)
        c = random_simplicial_complex(rng, MORSE_MAX_CELLS)
        sizes.append(len(c.cells))
        mc = morse_complex(c, random_acyclic_matching(rng, c), check=False)
        ref = homology_of_complex(c.chain_complex())
        top = [x for x in c.cells if not c.cofaces[x]]
        direct = homology(from_simplicial_complex(top))
        if not ((mc.homology.betti, mc.homology.torsion) == (ref.betti, ref.torsion) == (direct.betti, direct.torsion)):
            bad += 1
    ok = bad == 0 and max(sizes) <= MORSE_MAX_CELLS
    return record(9, "Morse homology equals simplicial homology", ok, f"{MORSE_SAMPLES} matchings, {bad} mismatches, up to {max(sizes)} cells")


def criterion_10() -> bool:
    checked, bad = 0, []
    for name, c in fixture_categories().items():
        strat = unstable_stratification(c)
        for x in c.objects:
            star = lower_star(c, x, strat.space)
            for rep in (verify_cone(star), verify_stratum_equals_star(c, x, strat, star)):
                if not rep.ok:
                    bad.append((name, x, rep.failures()[:1]))
            checked += 1
    return record(10, "lower stars are cones and open stars are strata", not bad, f"{checked} objects of {len(fixture_categories())} discrete fixtures, {len(bad)} failures")


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def test_criterion_01_roundtrip():
    assert criterion_1(), line(1)


def test_criterion_02_chain_nerves():
    assert criterion_2(), line(2)


def test_criterion_03_suspension():
    assert criterion_3(), line(3)


def test_criterion_04_implications():
    assert criterion_4(), line(4)


def test_criterion_05_join_law():
    assert criterion_5(), line(5)


def test_criterion_06_conical_charts():
    assert criterion_6(), line(6)


def test_criterion_07_horns():
    assert criterion_7(), line(7)


def test_criterion_08_morse_pipeline():
    assert criterion_8(), line(8)


def test_criterion_09_random_morse():
    assert criterion_9(), line(9)


def test_criterion_10_lower_stars():
    assert criterion_10(), line(10)


if __name__ == "__main__":
    results = [f() for f in CRITERIA]
    sys.exit(0 if all(results) else 1)
