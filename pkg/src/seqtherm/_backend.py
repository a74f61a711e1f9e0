"""Selects the enumeration kernel at import time.

The compiled Cython extension is preferred; the pure-numpy twin is used
when the extension is missing or when THERMO_BACKEND=python is set.
Both expose the same ``sms_fi_grid`` contract and are cross-checked in
the test suite.
"""
from __future__ import annotations

import os

_forced = os.environ.get("THERMO_BACKEND", "").strip().lower()

if _forced == "python":
    from . import _kernels_py as _impl
elif _forced == "cython":
    from . import _kernels as _impl  # ImportError here is deliberate
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        from . import _kernels_py as _impl

BACKEND_NAME = _impl.BACKEND_NAME
sms_fi_grid = _impl.sms_fi_grid
