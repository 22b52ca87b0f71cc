"""Pick between the compiled slot kernel and its numpy fallback.

Resolution order: an explicit name, then the MACAOI_SIM_BACKEND
environment variable, then the compiled extension if it built, then
numpy. "reference" is the plain-Python stepper and is only sensible
for tests.
"""

from __future__ import annotations

import os
from importlib import import_module

_MODULES = {
    "cython": "macaoi.sim._kernel",
    "numpy": "macaoi.sim._kernel_py",
    "reference": "macaoi.sim.reference",
}


def resolve(name: str | None = None):
    """Return (backend_name, step_queue)."""
    if name is None:
        name = os.environ.get("MACAOI_SIM_BACKEND") or None
    if name is not None:
        if name not in _MODULES:
            raise ValueError(
                f"unknown simulator backend {name!r}; expected one of "
                f"{sorted(_MODULES)}")
        return name, import_module(_MODULES[name]).step_queue
    try:
        return "cython", import_module(_MODULES["cython"]).step_queue
    except ImportError:
        return "numpy", import_module(_MODULES["numpy"]).step_queue


def default_backend() -> str:
    """Name of the backend a plain run_simulation() call would use."""
    return resolve()[0]
