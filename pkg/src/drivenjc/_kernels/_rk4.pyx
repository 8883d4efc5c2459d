# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False, cdivision=True
"""Fixed-step RK4 for dv/dt = L v on small dense complex systems.

The generator is a constant matrix, so no step-size control is needed; the
caller picks h against the spectral radius. Hand-rolled matvec keeps the
whole step free of temporaries and Python calls, which matters at the
~1e6-substep scale of the physicality suites.
"""

import numpy as np


cdef inline void _matvec(
    const double complex[:, ::1] A,
    const double complex[::1] x,
    double complex[::1] y,
    Py_ssize_t n,
) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef double complex acc
    for i in range(n):
        acc = 0
        for j in range(n):
            acc = acc + A[i, j] * x[j]
        y[i] = acc


def rk4_propagate(L, v0, substeps, h):
    """Same contract as the fallback: (m+1, n) samples from per-interval steps."""
    L_arr = np.ascontiguousarray(L, dtype=np.complex128)
    v_arr = np.array(v0, dtype=np.complex128)
    n_arr = np.ascontiguousarray(substeps, dtype=np.int64)
    h_arr = np.ascontiguousarray(h, dtype=np.float64)

    cdef const double complex[:, ::1] Lm = L_arr
    cdef double complex[::1] v = v_arr
    cdef const long long[::1] counts = n_arr
    cdef const double[::1] steps = h_arr
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t m = counts.shape[0]

    out_arr = np.empty((m + 1, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    work = np.empty((5, n), dtype=np.complex128)
    cdef double complex[:, ::1] w = work

    cdef Py_ssize_t i, j, s
    cdef long long nsub
    cdef double hi

    with nogil:
        for j in range(n):
            out[0, j] = v[j]
        for i in range(m):
            hi = steps[i]
            nsub = counts[i]
            for s in range(nsub):
                _matvec(Lm, v, w[0], n)                      # k1
                for j in range(n):
                    w[4, j] = v[j] + 0.5 * hi * w[0, j]
                _matvec(Lm, w[4], w[1], n)                   # k2
                for j in range(n):
                    w[4, j] = v[j] + 0.5 * hi * w[1, j]
                _matvec(Lm, w[4], w[2], n)                   # k3
                for j in range(n):
                    w[4, j] = v[j] + hi * w[2, j]
                _matvec(Lm, w[4], w[3], n)                   # k4
                for j in range(n):
                    v[j] = v[j] + (hi / 6.0) * (
                        w[0, j] + 2.0 * (w[1, j] + w[2, j]) + w[3, j]
                    )
            for j in range(n):
                out[i + 1, j] = v[j]

    return out_arr
