"""Kernel selection: compiled extension when available, pure Python otherwise.

Set ``HARDY_CKN_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

BACKEND = "python"
integrate_linear = _pykernels.integrate_linear

if os.environ.get("HARDY_CKN_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        integrate_linear = _ckernels.integrate_linear
        BACKEND = "cython"

STATUS_MESSAGES = {
    1: "step size underflow",
    2: "too many steps",
    3: "non-finite state",
}

__all__ = ["BACKEND", "integrate_linear", "STATUS_MESSAGES"]
