"""Backend selection for the hot integration loops.

The compiled extension is used when it imports; set ``ECOPLAN_PURE_PYTHON=1``
to force the numpy fallback.
"""
import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["compiled"] = _compiled

if _compiled is not None and not os.environ.get("ECOPLAN_PURE_PYTHON"):
    BACKEND = "compiled"
else:
    BACKEND = "python"

_impl = BACKENDS[BACKEND]
rk4_final = _impl.rk4_final
rk4_path = _impl.rk4_path


def get(name=None):
    """Kernel module by name (``"compiled"`` or ``"python"``); default is the active one."""
    return BACKENDS[name or BACKEND]
