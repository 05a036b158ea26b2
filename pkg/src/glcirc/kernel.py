"""Selects the countermodel-scan implementation at import time.

The compiled extension is preferred; set ``GLC_PURE_PYTHON=1`` to force the
numpy fallback.
"""

from __future__ import annotations

import os

from . import _kernel_py

try:
    if os.environ.get("GLC_PURE_PYTHON"):
        raise ImportError("compiled kernel disabled by GLC_PURE_PYTHON")
    from ._kernel import first_failure as _compiled_first_failure
except ImportError:
    _compiled_first_failure = None

IMPLEMENTATIONS = {"python": _kernel_py.first_failure}
if _compiled_first_failure is not None:
    IMPLEMENTATIONS["compiled"] = _compiled_first_failure

BACKEND = "compiled" if _compiled_first_failure is not None else "python"
first_failure = IMPLEMENTATIONS[BACKEND]
