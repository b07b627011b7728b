"""Pure-Python elimination kernels (arbitrary precision).

Reference twins of the compiled kernels in ``_kernels.pyx``; the selector
in :mod:`strata.kernels` falls back to these when the extension is missing
or overflows.
"""

from __future__ import annotations


def _as_rows(matrix) -> list[list[int]]:
    if hasattr(matrix, "tolist"):
        matrix = matrix.tolist()
    return [[int(v) for v in row] for row in matrix]


def smith_diagonal(matrix) -> list[int]:
    """Nonzero Smith invariants of an integer matrix, as positive ints.

    The returned list is not sorted into divisibility order; callers only
    need the multiset (rank and torsion), which is an invariant of any
    diagonalisation reached through unimodular row/column operations
    followed by the divisibility fix-up performed here.
    """
    a = _as_rows(matrix)
    m = len(a)
    n = len(a[0]) if m else 0
    out: list[int] = []
    t = 0
    while t < m and t < n:
        pivot = None
        for i in range(t, m):
            for j in range(t, n):
                v = a[i][j]
                if v and (pivot is None or abs(v) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        _swap(a, t, pivot[0], pivot[1])
        while True:
            clean = True
            p = a[t][t]
            for i in range(t + 1, m):
                if a[i][t]:
                    q = a[i][t] // p
                    row_t = a[t]
                    row_i = a[i]
                    for j in range(t, n):
                        if row_t[j]:
                            row_i[j] -= q * row_t[j]
                    if row_i[t]:
                        clean = False
            for j in range(t + 1, n):
                if a[t][j]:
                    q = a[t][j] // p
                    for i in range(t, m):
                        if a[i][t]:
                            a[i][j] -= q * a[i][t]
                    if a[t][j]:
                        clean = False
            if not clean:
                bi, bj = t, t
                for i in range(t + 1, m):
                    if a[i][t] and abs(a[i][t]) < abs(a[bi][bj]):
                        bi, bj = i, t
                for j in range(t + 1, n):
                    if a[t][j] and abs(a[t][j]) < abs(a[bi][bj]):
                        bi, bj = t, j
                _swap(a, t, bi, bj)
                continue
            p = a[t][t]
            bad = next(
                (i for i in range(t + 1, m) if any(a[i][j] % p for j in range(t + 1, n))),
                None,
            )
            if bad is not None:
                a[t] = [x + y for x, y in zip(a[t], a[bad])]
                continue
            break
        out.append(abs(a[t][t]))
        t += 1
    return out


def _swap(a: list[list[int]], t: int, i: int, j: int) -> None:
    if i != t:
        a[t], a[i] = a[i], a[t]
    if j != t:
        for row in a:
            row[t], row[j] = row[j], row[t]


def rank_gf2(matrix) -> int:
    """Rank over the two-element field, rows packed into Python ints."""
    rows = []
    for row in _as_rows(matrix):
        bits = 0
        for j, v in enumerate(row):
            if v % 2:
                bits |= 1 << j
        if bits:
            rows.append(bits)
    rank = 0
    while rows:
        pivot = rows.pop()
        low = pivot & -pivot
        rank += 1
        rows = [r ^ pivot if r & low else r for r in rows]
        rows = [r for r in rows if r]
    return rank
