"""Pick the eigenvalue kernel implementation at import time.

The compiled extension is used when it was built; setting
``PTCHAIN_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

try:
    from . import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

_KERNELS = {"python": _kernels_py}
if _kernels_c is not None:
    _KERNELS["compiled"] = _kernels_c

if os.environ.get("PTCHAIN_PURE_PYTHON", "") not in ("", "0") or _kernels_c is None:
    DEFAULT_BACKEND = "python"
else:
    DEFAULT_BACKEND = "compiled"


def available_backends():
    return sorted(_KERNELS)


def get_kernels(name=None):
    name = DEFAULT_BACKEND if name is None else name
    try:
        return _KERNELS[name]
    except KeyError:
        raise ValueError(
            f"unknown or unavailable kernel backend {name!r}; "
            f"available: {available_backends()}"
        ) from None
