"""Kernel selection: the compiled ``_ckernels`` extension when importable,
otherwise the pure-Python ``_kernels_py``.  Set ``LGCY_PURE_PYTHON=1`` to
force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("LGCY_PURE_PYTHON"):
    _impl = _kernels_py
else:
    try:
        from . import _ckernels as _impl
    except ImportError:  # extension not built
        _impl = _kernels_py

IMPLEMENTATION: str = _impl.IMPLEMENTATION
echelon = _impl.echelon
back_substitute = _impl.back_substitute

_INT64_SAFE = 1 << 62


def rank_mod_p(rows, ncols: int, p: int) -> int:
    if p >= 1 << 63:
        return _kernels_py.rank_mod_p(rows, ncols, p)
    return _impl.rank_mod_p(rows, ncols, p)


def assoc_scan(ptr, idx, val, dim: int, trace, lo: int = 0, hi: int | None = None):
    """Dispatch to the int64 kernel only when no intermediate can overflow."""
    maxv = max((abs(v) for v in val), default=0)
    maxt = max((abs(t) for t in trace), default=0)
    bound = max(dim, 1) ** 2 * maxv * maxv * max(maxt, 1)
    if _impl is not _kernels_py and bound < _INT64_SAFE:
        return _impl.assoc_scan(ptr, idx, val, dim, trace, lo, hi)
    return _kernels_py.assoc_scan(ptr, idx, val, dim, trace, lo, hi)


def implementations() -> dict:
    """Both kernel sets keyed by name (for the benchmark and parity tests)."""
    out = {"python": _kernels_py}
    try:
        from . import _ckernels

        out["cython"] = _ckernels
    except ImportError:
        pass
    return out
