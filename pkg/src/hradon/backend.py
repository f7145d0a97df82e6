"""Kernel backend selection: the compiled extension when importable, else numpy."""
from __future__ import annotations

from types import ModuleType

from . import _kernels_py

try:
    from . import _kernels as _compiled
except ImportError:  # extension not built
    _compiled = None

_active: ModuleType = _compiled if _compiled is not None else _kernels_py


def name() -> str:
    return "compiled" if _active is _compiled else "python"


def available() -> list[str]:
    return ["compiled", "python"] if _compiled is not None else ["python"]


def use(which: str) -> None:
    """Switch backend ("compiled" or "python"); used by tests and benchmarks."""
    global _active
    if which == "compiled":
        if _compiled is None:
            raise RuntimeError("compiled kernels are not built")
        _active = _compiled
    elif which == "python":
        _active = _kernels_py
    else:
        raise ValueError(f"unknown backend {which!r}")


def table_eval(*args):
    return _active.table_eval(*args)


def table_dyadic_sum(*args):
    return _active.table_dyadic_sum(*args)
