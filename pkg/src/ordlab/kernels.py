"""Kernel dispatch: the compiled extension when built, else pure Python.

Set ``ORDLAB_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _kernels_py

BACKEND = "python"
first_violation = _kernels_py.first_violation
monotone_assign = _kernels_py.monotone_assign

if not os.environ.get("ORDLAB_PURE_PYTHON"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        first_violation = _compiled.first_violation
        monotone_assign = _compiled.monotone_assign
