"""Backend selection for the normal-form kernel.

The compiled extension is used when it has been built and importable;
otherwise (or with ``COMPATHS_PURE_PYTHON=1``) the identical pure-Python
source is loaded.
"""

from __future__ import annotations

import importlib.util
import os
from pathlib import Path
from typing import Iterable

from .term import PathTerm


def _load_pure():
    path = Path(__file__).with_name("_kernel.py")
    spec = importlib.util.spec_from_file_location("compaths._kernel_pure", path)
    module = importlib.util.module_from_spec(spec)
    spec.loader.exec_module(module)
    return module


def load_backend(pure: bool = False):
    """Return the kernel module; ``pure=True`` forces the Python source."""
    if pure:
        return _load_pure()
    from . import _kernel
    return _kernel


_backend = load_backend(os.environ.get("COMPATHS_PURE_PYTHON") == "1")
COMPILED: bool = bool(_backend.compiled())
BACKEND = "cython" if COMPILED else "python"

_shared = None


def normalizer(step_limit: int = 10_000):
    return _backend.Normalizer(step_limit)


def normal_form(t: PathTerm) -> PathTerm:
    """Leftmost-innermost normal form of ``t`` under all 39 rules, no trace."""
    global _shared
    if _shared is None:
        _shared = _backend.Normalizer()
    return _shared.normal_form(t)


def normal_forms(terms: Iterable[PathTerm]) -> list[PathTerm]:
    return [normal_form(t) for t in terms]
