# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Cyclic Jacobi sweeps for dense symmetric matrices (compiled hot kernel).

The matrix is treated as symmetric with only the upper triangle (including
the diagonal) kept valid; callers must not read the lower triangle after a
call. Eigenvectors accumulate in the rows of ``vt`` so the kernel touches
contiguous memory.

Per sweep, rotations are skipped below an adaptive threshold proportional
to the current off-diagonal norm: annihilating an entry far below that norm
costs O(n) but barely advances convergence. The threshold never drops below
``skip`` (= target/n), which cannot stall convergence: if every entry were
below target/n the off-diagonal norm would already be below target.
"""

from libc.math cimport fabs, sqrt

BACKEND_NAME = "cython"

# fraction of off_norm/n below which a rotation is postponed to later sweeps
cdef double ADAPT = 0.5


def sweep_cyclic(double[:, ::1] a, double[:, ::1] vt, double target,
                 double skip, int max_sweeps):
    """Rotate until the off-diagonal Frobenius norm is <= target.

    Returns (sweeps_done, off_norm, converged).
    """
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t p, q, r, sweep
    cdef double off2, off, apq, app, aqq, theta, t, c, s, tau, g, h, tresh
    cdef bint converged = 0
    cdef Py_ssize_t sweeps_done = 0

    if n < 2:
        return 0, 0.0, True

    with nogil:
        for sweep in range(max_sweeps + 1):
            off2 = 0.0
            for p in range(n - 1):
                for q in range(p + 1, n):
                    off2 += a[p, q] * a[p, q]
            off = sqrt(2.0 * off2)
            if off <= target:
                converged = 1
                break
            if sweep == max_sweeps:
                break
            tresh = ADAPT * off / n
            if tresh < skip:
                tresh = skip
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if fabs(apq) <= tresh:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    theta = 0.5 * (aqq - app) / apq
                    if theta >= 0.0:
                        t = 1.0 / (theta + sqrt(theta * theta + 1.0))
                    else:
                        t = -1.0 / (sqrt(theta * theta + 1.0) - theta)
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    tau = s / (1.0 + c)
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    for r in range(p):
                        g = a[r, p]
                        h = a[r, q]
                        a[r, p] = g - s * (h + tau * g)
                        a[r, q] = h + s * (g - tau * h)
                    for r in range(p + 1, q):
                        g = a[p, r]
                        h = a[r, q]
                        a[p, r] = g - s * (h + tau * g)
                        a[r, q] = h + s * (g - tau * h)
                    for r in range(q + 1, n):
                        g = a[p, r]
                        h = a[q, r]
                        a[p, r] = g - s * (h + tau * g)
                        a[q, r] = h + s * (g - tau * h)
                    for r in range(n):
                        g = vt[p, r]
                        h = vt[q, r]
                        vt[p, r] = g - s * (h + tau * g)
                        vt[q, r] = h + s * (g - tau * h)
            sweeps_done = sweep + 1

    return sweeps_done, off, bool(converged)
