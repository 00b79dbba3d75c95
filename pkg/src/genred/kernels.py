"""Kernel selection: the compiled extension when built, else the pure-Python fallback.

Set ``GENRED_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("GENRED_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:  # pragma: no cover - depends on whether the extension was built
        from . import _kernels as _compiled

        _impl = _compiled
        BACKEND = "cython"
    except ImportError:  # pragma: no cover
        pass

BITS = _kernels_py.BITS
MASK = _kernels_py.MASK
mul = _impl.mul
lincomb = _impl.lincomb
scale = _impl.scale
diff = _impl.diff
content = _impl.content
divide_int = _impl.divide_int

__all__ = ["BACKEND", "BITS", "MASK", "mul", "lincomb", "scale", "diff", "content", "divide_int"]
