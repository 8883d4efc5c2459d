"""Propagation kernels: compiled extension when built, NumPy twin otherwise."""

try:
    from ._rk4 import rk4_propagate

    BACKEND = "compiled"
except ImportError:  # extension not built on this interpreter
    from .fallback import rk4_propagate

    BACKEND = "numpy"

__all__ = ["BACKEND", "rk4_propagate"]
