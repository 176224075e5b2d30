"""Element-matrix kernels.

The compiled Cython extension ``_ckernels`` is used when it was built;
otherwise the NumPy implementation in ``_pykernels`` is selected.  Set
``SGMIXED_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
local_blocks = _pykernels.local_blocks

if os.environ.get("SGMIXED_PURE_PYTHON", "") in ("", "0"):
    try:
        from . import _ckernels
    except ImportError:  # extension not built
        pass
    else:
        local_blocks = _ckernels.local_blocks
        BACKEND = "cython"

__all__ = ["BACKEND", "local_blocks"]
