"""Kernel selection: compiled extension when available, pure Python otherwise.

Set FES_PURE_PYTHON=1 to force the fallback (used by the benchmark and by
tests that compare the two backends).
"""

import os

if os.environ.get("FES_PURE_PYTHON"):
    from ._pykernel import BACKEND_NAME, solve_fes
else:
    try:
        from ._ckernel import BACKEND_NAME, solve_fes
    except ImportError:
        from ._pykernel import BACKEND_NAME, solve_fes

__all__ = ["solve_fes", "BACKEND_NAME"]
