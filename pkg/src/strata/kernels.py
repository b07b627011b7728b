"""Backend selection for the elimination kernels.

The compiled extension is used when it imports and ``STRATA_PURE_PYTHON``
is unset; otherwise the pure-Python twins run.  An ``OverflowError`` from
the int64 kernel is retried on the arbitrary-precision path.
"""

from __future__ import annotations

import os

from . import _kernels_py

_compiled = None
if not os.environ.get("STRATA_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled  # type: ignore[attr-defined]
    except ImportError:  # extension not built
        _compiled = None

BACKEND = "compiled" if _compiled is not None else "python"


def smith_diagonal(matrix, backend: str | None = None) -> list[int]:
    impl = _pick(backend)
    if impl is _compiled:
        try:
            return impl.smith_diagonal(matrix)
        except OverflowError:
            return _kernels_py.smith_diagonal(matrix)
    return impl.smith_diagonal(matrix)


def rank_gf2(matrix, backend: str | None = None) -> int:
    return _pick(backend).rank_gf2(matrix)


def _pick(backend: str | None):
    if backend is None:
        return _compiled if _compiled is not None else _kernels_py
    if backend == "python":
        return _kernels_py
    if backend == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not available")
        return _compiled
    raise ValueError(f"unknown backend {backend!r}")
