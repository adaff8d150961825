"""Hot numerical kernels with a compiled core and a pure-Python fallback.

The compiled extension is preferred when importable; set the environment
variable ``SYMSTAB_PURE_PYTHON=1`` to force the fallback (used by tests and
the kernel benchmark).
"""

import os

if os.environ.get("SYMSTAB_PURE_PYTHON"):
    from .fallback import aberth_refine, apply_one_qubit

    BACKEND = "python"
else:
    try:
        from ._native import aberth_refine, apply_one_qubit

        BACKEND = "native"
    except ImportError:
        from .fallback import aberth_refine, apply_one_qubit

        BACKEND = "python"

__all__ = ["aberth_refine", "apply_one_qubit", "BACKEND"]
