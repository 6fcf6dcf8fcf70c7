"""Kernel backend selection.

The compiled extension is used when importable. Setting the environment
variable ``CPBFRIDGE_PURE_PYTHON=1`` forces the pure-Python fallback.
"""
import os

from . import _kernels_py

try:
    if os.environ.get("CPBFRIDGE_PURE_PYTHON") == "1":
        raise ImportError("pure-Python backend requested")
    from . import _kernels as _backend

    BACKEND = "compiled"
except ImportError:
    _backend = _kernels_py
    BACKEND = "python"

bloch_cycle = _backend.bloch_cycle
jacobi_eigh = _backend.jacobi_eigh


def get_backend(name=None):
    """Return the kernel module for ``name`` ("compiled", "python" or None for default)."""
    if name is None:
        return _backend
    if name == "python":
        return _kernels_py
    if name == "compiled":
        from . import _kernels

        return _kernels
    raise ValueError(f"unknown kernel backend {name!r}")
