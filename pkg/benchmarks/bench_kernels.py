"""Compare the compiled and pure-Python elimination kernels.

    python3 benchmarks/bench_kernels.py --repeat 3

Inputs are boundary matrices of a few spaces plus seeded random sparse
integer matrices.  Both backends must agree on every input.  Dense random
matrices suffer coefficient growth, so the compiled Smith kernel hands them
to the arbitrary-precision path; the table marks those rows.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from strata import kernels
from strata.acyccat import chain_category
from strata.homology import chain_complex
from strata.poset import order_complex, product_poset, chain_poset
from strata.simpset import circle, product


def inputs(seed: int) -> list[tuple[str, np.ndarray]]:
    out = []
    spaces = {
        "torus d2": product(circle(4), circle(4)),
        "B[6] d3": chain_category(6).nondegenerate_nerve(),
        "grid 3x3 d2": order_complex(product_poset(chain_poset(3), chain_poset(3))),
    }
    for name, x in spaces.items():
        n = int(name.rsplit("d", 1)[1])
        out.append((name, chain_complex(x).boundary(n)))
    rng = np.random.default_rng(seed)
    for rows, cols in ((40, 60), (80, 80), (120, 100)):
        m = rng.integers(-2, 3, size=(rows, cols))
        m[rng.random((rows, cols)) < 0.8] = 0
        out.append((f"random {rows}x{cols}", m.astype(np.int64)))
    return out


def overflows(m: np.ndarray) -> bool:
    from strata import _kernels

    try:
        _kernels.smith_diagonal(m)
    except OverflowError:
        return True
    return False


def best_of(fn, repeat: int) -> float:
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t)
    return min(times)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    if kernels.BACKEND != "compiled":
        print("compiled kernels are unavailable; only the Python backend will run")
    backends = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    print(f"{'input':<18}{'shape':>10}  {'kernel':<8}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for name, m in inputs(args.seed):
        for kname, fn in (("smith", kernels.smith_diagonal), ("gf2", kernels.rank_gf2)):
            arg = m if kname == "smith" else m % 2
            results = {b: fn(arg, backend=b) for b in backends}
            if len({repr(r) for r in results.values()}) != 1:
                raise SystemExit(f"backends disagree on {name} ({kname})")
            t = {b: best_of(lambda b=b: fn(arg, backend=b), args.repeat) for b in backends}
            speed = f"{t['python'] / t['compiled']:>9.1f}x" if "compiled" in t and t["compiled"] > 0 else ""
            if "compiled" in t and kname == "smith" and overflows(arg):
                speed += "  (int64 overflow, ran on the Python path)"
            shape = f"{m.shape[0]}x{m.shape[1]}"
            print(f"{name:<18}{shape:>10}  {kname:<8}" + "".join(f"{t[b] * 1e3:>10.2f}ms" for b in backends) + speed)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
