"""Hot numeric kernels.

The numba backend is used when numba imports cleanly and the environment
variable ``HMMCHECK_DISABLE_NUMBA`` is unset or ``0``; otherwise the
vectorised numpy backend is used.  Both expose the same four functions.
"""
import os

from . import _numpy

BACKEND = "numpy"
_impl = _numpy

if os.environ.get("HMMCHECK_DISABLE_NUMBA", "0") in ("", "0"):
    try:
        from . import _numba
    except ImportError:  # numba missing or broken
        pass
    else:
        _impl = _numba
        BACKEND = "numba"

gauss_solve = _impl.gauss_solve
backward_reach = _impl.backward_reach
forward_reach = _impl.forward_reach
assemble_split = _impl.assemble_split


def backends():
    """Available backend modules keyed by name."""
    out = {"numpy": _numpy}
    try:
        from . import _numba
    except ImportError:
        pass
    else:
        out["numba"] = _numba
    return out


__all__ = ["BACKEND", "gauss_solve", "backward_reach", "forward_reach", "assemble_split", "backends"]
