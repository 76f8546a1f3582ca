"""Kernel lane selection: compiled extension when built, numpy otherwise.

``FBMWALK_BACKEND=numpy`` or ``FBMWALK_BACKEND=cython`` forces a lane; the
latter raises if the extension is missing rather than silently degrading.
"""

from __future__ import annotations

import os

from . import _kernels as _numpy_kernels

try:
    from . import _kernels_cy as _cython_kernels
except ImportError:
    _cython_kernels = None

_forced = os.environ.get("FBMWALK_BACKEND", "").strip().lower()
if _forced == "numpy":
    kernels = _numpy_kernels
    BACKEND = "numpy"
elif _forced == "cython":
    if _cython_kernels is None:
        raise ImportError(
            "FBMWALK_BACKEND=cython but the compiled extension is not built; "
            "run `python setup.py build_ext --inplace` or reinstall"
        )
    kernels = _cython_kernels
    BACKEND = "cython"
elif _forced:
    raise ValueError(f"unknown FBMWALK_BACKEND={_forced!r}; use 'numpy' or 'cython'")
else:
    kernels = _cython_kernels if _cython_kernels is not None else _numpy_kernels
    BACKEND = "cython" if _cython_kernels is not None else "numpy"
