"""Select the compiled kernels when importable, else the numpy fallback.

Set ``HYBRIDBM_BACKEND=python`` to force the fallback or
``HYBRIDBM_BACKEND=cython`` to make a missing extension an error.
"""
from __future__ import annotations

import importlib
import os

from . import _pykernels


def load(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("hybridbm._kernels")
    raise ValueError(f"unknown backend {name!r}")


def _select():
    forced = os.environ.get("HYBRIDBM_BACKEND", "").strip().lower()
    if forced == "python":
        return "python", _pykernels
    try:
        return "cython", load("cython")
    except ImportError:
        if forced == "cython":
            raise
        return "python", _pykernels


BACKEND, kernels = _select()
