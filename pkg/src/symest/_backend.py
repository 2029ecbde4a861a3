"""Kernel backend selection: compiled extension if available, else Python.

Set ``SYMEST_BACKEND=python`` or ``SYMEST_BACKEND=compiled`` to force a
backend (the latter raises if the extension was not built).  Both backends
are bit-identical; the compiled one is two to three orders of magnitude
faster on chain runs.
"""

from __future__ import annotations

import os

from . import _kernels_py

_FORCED = os.environ.get("SYMEST_BACKEND", "").strip().lower()

if _FORCED == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels  # type: ignore[no-redef]
    except ImportError:
        if _FORCED == "compiled":
            raise ImportError(
                "SYMEST_BACKEND=compiled but the symest._kernels extension "
                "is not built; run `pip install -e . --no-build-isolation`")
        kernels = _kernels_py


def active_backend() -> str:
    """Name of the kernel backend in use: 'compiled' or 'python'."""
    return kernels.BACKEND_NAME


def available_backends() -> dict:
    """All importable kernel backends keyed by name."""
    out = {_kernels_py.BACKEND_NAME: _kernels_py}
    try:
        from . import _kernels
        out[_kernels.BACKEND_NAME] = _kernels
    except ImportError:
        pass
    return out
