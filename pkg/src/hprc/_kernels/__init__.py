"""Kernel backend selection.

The compiled extension is used when it imports; set HPRC_PURE_PYTHON=1 to
force the fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

_compiled = None
if os.environ.get("HPRC_PURE_PYTHON", "") != "1":
    try:
        from . import _ckernels as _compiled
    except ImportError:  # extension not built
        _compiled = None

_impl = _compiled if _compiled is not None else _pykernels
BACKEND = "cython" if _compiled is not None else "python"

max_flow_arrays = _impl.max_flow_arrays
subset_cut_values = _impl.subset_cut_values


def available_backends() -> list[str]:
    names = ["python"]
    try:
        from . import _ckernels  # noqa: F401
        names.append("cython")
    except ImportError:
        pass
    return names


def get_backend(name: str):
    """Module exposing max_flow_arrays and subset_cut_values for `name`."""
    if name == "python":
        return _pykernels
    if name == "cython":
        from . import _ckernels
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
