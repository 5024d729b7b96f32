"""Backend selection for the search kernels.

The compiled extension (``_native``) is used when it was built; otherwise the
pure-Python ``_purepy`` module is used. Set ``FILLED_GROUPS_BACKEND=python``
to force the fallback.
"""

from __future__ import annotations

import os

from . import _purepy
from ._purepy import GOLDEN, MASK64, MODE_ALL, MODE_FIRST, MODE_NONFILLING, mix64

try:
    from . import _native
except ImportError:  # extension not built
    _native = None

__all__ = [
    "MODE_ALL",
    "MODE_FIRST",
    "MODE_NONFILLING",
    "available_backends",
    "default_backend",
    "kernel_for",
    "stream_state",
]

_MODULES = {"python": _purepy}
if _native is not None:
    _MODULES["compiled"] = _native


def available_backends() -> list[str]:
    return sorted(_MODULES)


def default_backend() -> str:
    wanted = os.environ.get("FILLED_GROUPS_BACKEND", "").strip().lower()
    if wanted:
        if wanted not in _MODULES:
            raise RuntimeError(f"backend {wanted!r} unavailable; have {available_backends()}")
        return wanted
    return "compiled" if "compiled" in _MODULES else "python"


def kernel_for(group, backend: str | None = None):
    """Kernel bound to ``group``'s table, cached on the group per backend."""
    backend = backend or default_backend()
    cache = group._kernels
    if backend not in cache:
        cache[backend] = _MODULES[backend].Kernel(group.table, group.inv, group.squares)
    return cache[backend]


def stream_state(seed: int, restart: int) -> int:
    """Initial splitmix64 state for restart ``restart`` of a run seeded with ``seed``."""
    return mix64((seed & MASK64) ^ mix64(((restart + 1) * GOLDEN) & MASK64))
