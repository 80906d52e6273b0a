"""Hot GF(2) kernels with two interchangeable backends.

``QRANK_BACKEND=numba`` (default when numba imports) uses the jitted loops in
:mod:`qrank.kernels.jit`; ``QRANK_BACKEND=numpy`` uses the vectorised
fallbacks in :mod:`qrank.kernels.vec`.  Both expose identical signatures and
must return identical results.
"""

from __future__ import annotations

import os

_requested = os.environ.get("QRANK_BACKEND", "numba").strip().lower()
if _requested not in ("numba", "numpy"):
    raise ImportError(f"QRANK_BACKEND must be 'numba' or 'numpy', got {_requested!r}")

if _requested == "numba":
    try:
        from . import jit as impl
    except ImportError:  # pragma: no cover - numba missing
        from . import vec as impl

        _requested = "numpy"
else:
    from . import vec as impl

BACKEND: str = _requested

rref_inplace = impl.rref_inplace
batch_rank = impl.batch_rank
gray_scan = impl.gray_scan
build_symplectic = impl.build_symplectic
simulate_batch = impl.simulate_batch

__all__ = [
    "BACKEND",
    "batch_rank",
    "build_symplectic",
    "gray_scan",
    "rref_inplace",
    "simulate_batch",
]
