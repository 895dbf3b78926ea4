"""Elimination kernels: compiled core when built, numpy fallback otherwise.

Set ``CARTANSUPER_KERNELS=python`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pykernels as python_backend

compiled_backend = None
if os.environ.get("CARTANSUPER_KERNELS", "").lower() != "python":
    try:
        from . import _ckernels as compiled_backend  # type: ignore[no-redef]
    except ImportError:
        compiled_backend = None

_active = compiled_backend or python_backend

BACKEND: str = _active.BACKEND
SparseEliminator = _active.SparseEliminator
rref_inplace = _active.rref_inplace
matmul_mod = python_backend.matmul_mod

__all__ = ["BACKEND", "SparseEliminator", "rref_inplace", "matmul_mod", "python_backend", "compiled_backend"]
