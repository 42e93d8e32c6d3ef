"""Selects the clique kernel: compiled when importable, else pure Python.

``JSCHEME_BACKEND=python`` forces the fallback.
"""
from __future__ import annotations

import os

from . import _pykernel

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None

KERNELS = {"python": _pykernel.clique_search}
if _compiled is not None:
    KERNELS["compiled"] = _compiled.clique_search


def default_backend() -> str:
    forced = os.environ.get("JSCHEME_BACKEND")
    if forced:
        if forced not in KERNELS:
            raise RuntimeError(f"JSCHEME_BACKEND={forced!r} unavailable; have {sorted(KERNELS)}")
        return forced
    return "compiled" if "compiled" in KERNELS else "python"


def get_kernel(backend: str | None = None):
    name = backend or default_backend()
    try:
        return KERNELS[name]
    except KeyError:
        raise ValueError(f"unknown or unavailable backend {name!r}; have {sorted(KERNELS)}") from None
