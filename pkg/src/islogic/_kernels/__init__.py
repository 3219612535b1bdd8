"""Hot kernels with a compiled backend and a pure-Python fallback.

The compiled extension ``_core`` is used when it imports; setting
``ISLOGIC_PURE=1`` forces the fallback.  ``BACKEND`` names the active one.
"""

import os

from . import _pure

if os.environ.get("ISLOGIC_PURE", "") not in ("", "0"):
    _core = None
else:
    try:
        from . import _core
    except ImportError:
        _core = None

if _core is not None:
    first_countermodel = _core.first_countermodel
    solve = _core.solve
    BACKEND = "cython"
else:
    first_countermodel = _pure.first_countermodel
    solve = _pure.solve
    BACKEND = "python"

__all__ = ["first_countermodel", "solve", "BACKEND"]
