"""Pure NumPy twin of the compiled RK4 kernel. Same contract, slower."""

from __future__ import annotations

import numpy as np


def rk4_propagate(
    L: np.ndarray,
    v0: np.ndarray,
    substeps: np.ndarray,
    h: np.ndarray,
) -> np.ndarray:
    """Fixed-step classical RK4 for dv/dt = L v with per-interval stepping.

    Advances v0 through len(substeps) grid intervals; interval i is covered
    by substeps[i] equal steps of size h[i]. Returns the (m+1, n) array of
    samples including the initial vector.
    """
    L = np.asarray(L, dtype=complex)
    v = np.array(v0, dtype=complex)
    substeps = np.asarray(substeps, dtype=np.int64)
    h = np.asarray(h, dtype=float)
    out = np.empty((len(substeps) + 1, v.size), dtype=complex)
    out[0] = v
    for i in range(len(substeps)):
        hi = h[i]
        for _ in range(substeps[i]):
            k1 = L @ v
            k2 = L @ (v + 0.5 * hi * k1)
            k3 = L @ (v + 0.5 * hi * k2)
            k4 = L @ (v + hi * k3)
            v = v + (hi / 6.0) * (k1 + 2.0 * (k2 + k3) + k4)
        out[i + 1] = v
    return out
