"""Backend selection for the hot loops.

The compiled extension is used when it imports; otherwise the pure-Python
module with identical semantics takes over.  Both are importable by name so
tests and the benchmark can compare them directly.
"""

from __future__ import annotations

from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

active: ModuleType = _compiled if _compiled is not None else _kernels_py
BACKEND: str = active.BACKEND


def available() -> list[str]:
    return ["python"] + (["cython"] if _compiled is not None else [])


def get_backend(name: str | None = None) -> ModuleType:
    if name is None:
        return active
    if name == "python":
        return _kernels_py
    if name == "cython":
        if _compiled is None:
            raise ImportError("compiled kernels are not built")
        return _compiled
    raise ValueError(f"unknown backend {name!r}")
