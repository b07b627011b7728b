# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled elimination kernels.

Same contracts as :mod:`strata._kernels_py`.  Entries are int64; any
intermediate leaving the +/-2**31 window raises ``OverflowError`` so the
caller can retry with the arbitrary-precision fallback.
"""

import numpy as np
cimport numpy as cnp

cnp.import_array()

cdef long long LIMIT = 2147483648


cdef inline long long _abs(long long v) nogil:
    return -v if v < 0 else v


cdef inline long long _floordiv(long long a, long long b) nogil:
    # Python floor semantics; cdivision truncates toward zero.
    cdef long long q = a / b
    if (a % b != 0) and ((a < 0) != (b < 0)):
        q -= 1
    return q


cdef int _check(long long v) except -1:
    if v > LIMIT or v < -LIMIT:
        raise OverflowError("entry left the int64 safe window")
    return 0


def smith_diagonal(matrix):
    """Nonzero Smith invariants of an integer matrix, as positive ints."""
    cdef cnp.ndarray[cnp.int64_t, ndim=2] arr = np.array(matrix, dtype=np.int64, ndmin=2, copy=True)
    cdef long long[:, ::1] a = np.ascontiguousarray(arr)
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t t = 0, i, j, bi, bj
    cdef long long best, v, q, p
    cdef bint clean, found
    out = []
    if m == 0 or n == 0:
        return out
    while t < m and t < n:
        best = 0
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                v = _abs(a[i, j])
                if v != 0 and (best == 0 or v < best):
                    best = v
                    bi = i
                    bj = j
        if bi < 0:
            break
        _swap_rows(a, t, bi)
        _swap_cols(a, t, bj)
        while True:
            clean = True
            p = a[t, t]
            for i in range(t + 1, m):
                if a[i, t] != 0:
                    q = _floordiv(a[i, t], p)
                    _check(q)
                    for j in range(t, n):
                        if a[t, j] != 0:
                            _check(a[t, j])
                            a[i, j] -= q * a[t, j]
                            _check(a[i, j])
                    if a[i, t] != 0:
                        clean = False
            for j in range(t + 1, n):
                if a[t, j] != 0:
                    q = _floordiv(a[t, j], p)
                    _check(q)
                    for i in range(t, m):
                        if a[i, t] != 0:
                            _check(a[i, t])
                            a[i, j] -= q * a[i, t]
                            _check(a[i, j])
                    if a[t, j] != 0:
                        clean = False
            if not clean:
                best = _abs(a[t, t])
                bi = t
                bj = t
                for i in range(t + 1, m):
                    v = _abs(a[i, t])
                    if v != 0 and v < best:
                        best = v
                        bi = i
                        bj = t
                for j in range(t + 1, n):
                    v = _abs(a[t, j])
                    if v != 0 and v < best:
                        best = v
                        bi = t
                        bj = j
                _swap_rows(a, t, bi)
                _swap_cols(a, t, bj)
                continue
            p = a[t, t]
            found = False
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if a[i, j] % p != 0:
                        found = True
                        break
                if found:
                    break
            if found:
                for j in range(t, n):
                    a[t, j] += a[i, j]
                    _check(a[t, j])
                continue
            break
        out.append(int(_abs(a[t, t])))
        t += 1
    return out


cdef void _swap_rows(long long[:, ::1] a, Py_ssize_t r, Py_ssize_t s) nogil:
    cdef Py_ssize_t j
    cdef long long tmp
    if r == s:
        return
    for j in range(a.shape[1]):
        tmp = a[r, j]
        a[r, j] = a[s, j]
        a[s, j] = tmp


cdef void _swap_cols(long long[:, ::1] a, Py_ssize_t c, Py_ssize_t d) nogil:
    cdef Py_ssize_t i
    cdef long long tmp
    if c == d:
        return
    for i in range(a.shape[0]):
        tmp = a[i, c]
        a[i, c] = a[i, d]
        a[i, d] = tmp


def rank_gf2(matrix):
    """Rank over the two-element field."""
    cdef cnp.ndarray[cnp.uint8_t, ndim=2] arr = (np.array(matrix, dtype=np.int64, ndmin=2) % 2).astype(np.uint8)
    cdef unsigned char[:, ::1] a = np.ascontiguousarray(arr)
    cdef Py_ssize_t m = a.shape[0]
    cdef Py_ssize_t n = a.shape[1]
    cdef Py_ssize_t r = 0, c, i, j, piv
    cdef unsigned char tmp
    if m == 0 or n == 0:
        return 0
    for c in range(n):
        if r == m:
            break
        piv = -1
        for i in range(r, m):
            if a[i, c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(n):
                tmp = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = tmp
        for i in range(m):
            if i != r and a[i, c]:
                for j in range(c, n):
                    a[i, j] ^= a[r, j]
        r += 1
    return int(r)
