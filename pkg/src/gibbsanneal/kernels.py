"""Backend selection for the inner loops.

The compiled extension is used when it imports; set
``GIBBSANNEAL_PURE_PYTHON=1`` to force the pure-Python twins.
"""

from __future__ import annotations

import importlib
import os
from types import ModuleType

PURE_ENV = "GIBBSANNEAL_PURE_PYTHON"


def load_backend(name: str) -> ModuleType:
    """``"cython"`` or ``"python"``; raises ImportError if the extension is missing."""
    if name == "cython":
        return importlib.import_module("gibbsanneal._kernels")
    if name == "python":
        return importlib.import_module("gibbsanneal._kernels_py")
    raise ValueError(f"unknown backend {name!r}")


def _select() -> tuple[ModuleType, str]:
    if not os.environ.get(PURE_ENV):
        try:
            return load_backend("cython"), "cython"
        except ImportError:
            pass
    return load_backend("python"), "python"


_impl, BACKEND = _select()

spin_glauber = _impl.spin_glauber
matching_glauber = _impl.matching_glauber
rc_glauber = _impl.rc_glauber
rc_log_weights = _impl.rc_log_weights
