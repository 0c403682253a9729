"""Inner loops of the PL-surface computations.

The compiled extension is used when it was built and importable; otherwise
the numpy/scipy implementations are used.  Set ``REVISOP_PURE_PYTHON=1`` to
force the fallback.
"""

import os

from . import _pykernels

if os.environ.get("REVISOP_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

dijkstra = _impl.dijkstra
extend_min_plus = _impl.extend_min_plus
sublevel_measure = _impl.sublevel_measure


def backends():
    """Available implementations by name, compiled first when present."""
    out = {}
    try:
        from . import _ckernels
        out["cython"] = _ckernels
    except ImportError:
        pass
    out["python"] = _pykernels
    return out
