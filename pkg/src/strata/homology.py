"""Integral homology of finite simplicial sets via normalized chains."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .simpset import FinSimpSet


@dataclass
class ChainComplex:
    """Boundary matrices ``d[n]: C_n -> C_{n-1}`` (rows index ``C_{n-1}``)."""

    ranks: list[int]
    boundaries: dict[int, np.ndarray] = field(default_factory=dict)

    def boundary(self, n: int) -> np.ndarray:
        if n in self.boundaries:
            return self.boundaries[n]
        rows = self.ranks[n - 1] if 0 < n <= len(self.ranks) else 0
        cols = self.ranks[n] if 0 <= n < len(self.ranks) else 0
        return np.zeros((rows, cols), dtype=np.int64)

    def squares_to_zero(self) -> bool:
        for n in range(2, len(self.ranks)):
            a, b = self.boundary(n - 1), self.boundary(n)
            if a.size and b.size and np.any(a @ b):
                return False
        return True


@dataclass
class HomologyReport:
    betti: list[int]
    torsion: list[list[int]]

    def group(self, n: int) -> str:
        parts = []
        if self.betti[n]:
            parts.append("Z" if self.betti[n] == 1 else f"Z^{self.betti[n]}")
        parts.extend(f"Z/{t}" for t in self.torsion[n])
        return " + ".join(parts) if parts else "0"

    def as_dict(self) -> dict:
        return {"betti": self.betti, "torsion": self.torsion, "groups": [self.group(n) for n in range(len(self.betti))]}


def chain_complex(x: FinSimpSet) -> ChainComplex:
    """Normalized chains: degenerate faces contribute zero."""
    ranks = x.f_vector
    mats = {}
    for n in range(1, len(ranks)):
        d = np.zeros((ranks[n - 1], ranks[n]), dtype=np.int64)
        for k in range(ranks[n]):
            for i in range(n + 1):
                surj, (m, t) = x.face((n, k), i)
                if m == n - 1:
                    d[t, k] += -1 if i % 2 else 1
        mats[n] = d
    return ChainComplex(ranks, mats)


def homology_of_complex(cc: ChainComplex, backend: str | None = None) -> HomologyReport:
    top = len(cc.ranks)
    invariants = {}
    for n in range(1, top):
        invariants[n] = kernels.smith_diagonal(cc.boundary(n), backend=backend) if cc.ranks[n] and cc.ranks[n - 1] else []
    betti, torsion = [], []
    for n in range(top):
        rank_out = len(invariants.get(n, []))
        rank_in = len(invariants.get(n + 1, []))
        betti.append(cc.ranks[n] - rank_out - rank_in)
        torsion.append(sorted(v for v in invariants.get(n + 1, []) if v > 1))
    return HomologyReport(betti, torsion)


def homology(x: FinSimpSet, backend: str | None = None) -> HomologyReport:
    return homology_of_complex(chain_complex(x), backend=backend)


def mod2_betti(x: FinSimpSet, backend: str | None = None) -> list[int]:
    cc = chain_complex(x)
    ranks = [0] * (len(cc.ranks) + 1)
    for n in range(1, len(cc.ranks)):
        ranks[n] = kernels.rank_gf2(cc.boundary(n), backend=backend) if cc.boundary(n).size else 0
    return [cc.ranks[n] - ranks[n] - ranks[n + 1] for n in range(len(cc.ranks))]


def reduced_betti(x: FinSimpSet) -> list[int]:
    b = homology(x).betti
    if b:
        b[0] -= 1
    return b
