"""Dense symmetric eigensolver: cyclic Jacobi rotations.

The sweep kernel has two interchangeable implementations: a compiled
Cython extension (preferred) and a pure-numpy fallback. Selection happens
at import time; set GAPBOUND_KERNEL=python or =cython to force one.
"""

import os
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceFailure
from . import _jacobi_py

try:
    from . import _jacobi_cy
except ImportError:
    _jacobi_cy = None


def available_backends():
    names = ["python"]
    if _jacobi_cy is not None:
        names.insert(0, "cython")
    return names


def get_kernel(name):
    if name == "cython":
        if _jacobi_cy is None:
            raise ValueError("compiled kernel not built; only 'python' is available")
        return _jacobi_cy
    if name == "python":
        return _jacobi_py
    raise ValueError(f"unknown kernel backend {name!r}")


def _select_default():
    forced = os.environ.get("GAPBOUND_KERNEL")
    if forced:
        return get_kernel(forced)
    return _jacobi_cy if _jacobi_cy is not None else _jacobi_py


_default_kernel = _select_default()

BACKEND = _default_kernel.BACKEND_NAME


@dataclass(frozen=True)
class JacobiInfo:
    backend: str
    sweeps: int
    off_norm: float
    target: float


def jacobi_eigh(matrix, tol_factor=1e-13, max_sweeps=100, backend=None):
    """Full eigendecomposition of a real symmetric matrix.

    Returns (w, v, info) with eigenvalues ``w`` ascending and orthonormal
    eigenvectors in the columns of ``v``. Deterministic for a fixed backend:
    the rotation order is cyclic-by-row and ties in the final sort are
    broken stably.

    Raises ConvergenceFailure if the off-diagonal Frobenius norm does not
    reach ``tol_factor * ||A||_F`` within ``max_sweeps`` sweeps.
    """
    kernel = _default_kernel if backend is None else get_kernel(backend)
    a = np.array(matrix, dtype=np.float64, order="C", copy=True)
    n = a.shape[0]
    if a.ndim != 2 or a.shape[1] != n:
        raise ValueError("matrix must be square")

    fro = float(np.linalg.norm(a))
    target = tol_factor * fro
    vt = np.eye(n, dtype=np.float64)
    if fro == 0.0 or n == 1:
        w = np.diag(a).copy()
        info = JacobiInfo(kernel.BACKEND_NAME, 0, 0.0, target)
        return w, vt.T.copy(), info

    skip = target / n
    sweeps, off, converged = kernel.sweep_cyclic(a, vt, target, skip, max_sweeps)
    if not converged:
        raise ConvergenceFailure(
            f"Jacobi did not converge in {max_sweeps} sweeps "
            f"(off-diagonal norm {off:.3e}, target {target:.3e})")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    v = vt[order].T.copy()
    _fix_signs(v)
    info = JacobiInfo(kernel.BACKEND_NAME, sweeps, off, target)
    return w, v, info


def _fix_signs(v):
    """First component of each eigenvector exceeding noise is made positive."""
    n = v.shape[1]
    for j in range(n):
        col = v[:, j]
        mags = np.abs(col)
        thresh = 1e-12 * mags.max()
        lead = np.argmax(mags > thresh)
        if col[lead] < 0:
            # plain assignment: in-place ufuncs on strided column views
            # miscompute on this numpy build
            v[:, j] = -col
