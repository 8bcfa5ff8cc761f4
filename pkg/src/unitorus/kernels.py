"""Backend selection for the hot kernels.

The compiled extension is used when it was built and importable; setting
``UNITORUS_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("UNITORUS_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # noqa: F811
    except ImportError:
        _impl = _kernels_py
    else:
        BACKEND = "cython"

rref_int = _impl.rref_int
rank_int = _impl.rank_int
matmul_int = _impl.matmul_int
wedge_int = _impl.wedge_int

__all__ = ["BACKEND", "rref_int", "rank_int", "matmul_int", "wedge_int"]
