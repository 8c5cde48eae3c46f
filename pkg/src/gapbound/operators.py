"""Combinatorial Laplacians, stoquastic Hamiltonians H = L + W, and spectra.

The eigensolver is cyclic Jacobi (see jacobi.py for the kernel split); every
Spectrum is validated against residual, orthonormality and ground-state sign
invariants at construction time.
"""

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import (CertificateFailure, NegativePotential,
                     SpectrumInvariantError)
from .graphs import ConvexSubgraph, HomogeneousGraph
from .jacobi import jacobi_eigh

LAPLACIAN = "laplacian"
HAMILTONIAN = "hamiltonian"
PATH_LATTICE = "path_lattice"


@dataclass(frozen=True, eq=False)
class SymmetricOperator:
    entries: np.ndarray
    kind: str
    source: Optional[ConvexSubgraph] = None
    potential: Optional[np.ndarray] = None
    coords: Optional[np.ndarray] = None   # lattice coordinates (path_lattice)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def __post_init__(self):
        a = self.entries
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("operator must be square")
        if not np.array_equal(a, a.T):
            raise ValueError("operator must be exactly symmetric")
        if self.kind in (LAPLACIAN, PATH_LATTICE):
            if not np.allclose(a.sum(axis=1), 0.0, atol=0.0):
                raise ValueError("Laplacian rows must sum to zero")
            off = a - np.diag(np.diag(a))
            if not np.isin(off, (0.0, -1.0)).all():
                raise ValueError("Laplacian off-diagonals must be 0 or -1")
        if self.kind == HAMILTONIAN and self.potential is not None:
            if (self.potential < 0).any():
                raise NegativePotential("potential has a negative entry")

    def __repr__(self):
        return f"SymmetricOperator({self.kind}, dim={self.dim})"


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Ascending eigenvalues with orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    residuals: np.ndarray
    operator: SymmetricOperator
    backend: str
    sweeps: int
    tolerances: ToleranceConfig

    @property
    def dim(self) -> int:
        return self.eigenvalues.size

    @property
    def lambda0(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda1(self) -> float:
        return float(self.eigenvalues[1])

    @property
    def gap(self) -> float:
        return float(self.eigenvalues[1] - self.eigenvalues[0])

    def vector(self, i: int) -> np.ndarray:
        return self.eigenvectors[:, i]

    def eigenspace(self, i: int, rel_tol: float = 1e-9) -> np.ndarray:
        """Columns spanning the eigenspace of eigenvalue i (degeneracy-aware)."""
        w = self.eigenvalues
        scale = max(1.0, float(np.abs(w).max()))
        close = np.abs(w - w[i]) <= rel_tol * scale
        return self.eigenvectors[:, close]


def laplacian(obj: Union[ConvexSubgraph, HomogeneousGraph]) -> SymmetricOperator:
    """Combinatorial Laplacian: degrees on the diagonal, -1 on edges."""
    sub = obj.full_subgraph() if isinstance(obj, HomogeneousGraph) else obj
    m = sub.n_vertices
    a = np.zeros((m, m), dtype=np.float64)
    ar = np.arange(m)
    for ai in range(sub.nbr_local.shape[0]):
        cols = sub.nbr_local[ai]
        keep = cols >= 0
        a[ar[keep], cols[keep]] = -1.0
    a[ar, ar] = sub.degrees.astype(np.float64)
    return SymmetricOperator(entries=_ro(a), kind=LAPLACIAN, source=sub)


def boundary_potential(sub: ConvexSubgraph) -> np.ndarray:
    """W(y) = number of boundary edges at y; zero when the boundary is empty."""
    return sub.boundary_degree.astype(np.float64)


def dirichlet_hamiltonian(sub: ConvexSubgraph, w="boundary") -> SymmetricOperator:
    """H = L(S) + diag(W) for the boundary-induced or a user potential.

    With the boundary-induced W the spectrum equals the combinatorial
    Dirichlet eigenvalues of S inside its host.
    """
    if isinstance(w, str):
        if w != "boundary":
            raise ValueError(f"unknown potential spec {w!r}")
        pot = boundary_potential(sub)
    else:
        pot = np.asarray(w, dtype=np.float64)
        if pot.shape != (sub.n_vertices,):
            raise ValueError("potential length must match the vertex count")
        if (pot < 0).any():
            raise NegativePotential("potential has a negative entry")
    lap = laplacian(sub)
    h = lap.entries + np.diag(pot)
    return SymmetricOperator(entries=_ro(h), kind=HAMILTONIAN, source=sub,
                             potential=_ro(pot.copy()))


def path_lattice_laplacian(d: int, parity: str) -> SymmetricOperator:
    """Laplacian of the auxiliary path lattice over [-D, D].

    parity "even"/"odd" keeps lattice points of that parity (step 2); "unit"
    keeps every integer (step 1). With parity matching D the smallest
    non-trivial eigenvalue is 2(1 - cos(pi/(D+1))); for "unit" it is
    2(1 - cos(pi/(2D+1))).
    """
    if d < 1:
        raise ValueError("diameter must be >= 1")
    if parity == "unit":
        coords = np.arange(-d, d + 1)
    elif parity == "even":
        coords = np.arange(-d + (d % 2), d + 1, 2)
    elif parity == "odd":
        coords = np.arange(-d + 1 - (d % 2), d + 1, 2)
    else:
        raise ValueError(f"unknown parity {parity!r}")
    m = coords.size
    a = np.zeros((m, m))
    for i in range(m - 1):
        a[i, i + 1] = a[i + 1, i] = -1.0
    deg = np.ones(m)
    deg[1:-1] = 2.0
    if m == 1:
        deg[0] = 0.0
    a[np.arange(m), np.arange(m)] = deg
    return SymmetricOperator(entries=_ro(a), kind=PATH_LATTICE,
                             coords=_ro(coords.astype(np.int32)))


def eigendecompose(op: SymmetricOperator,
                   tol: ToleranceConfig = DEFAULT_TOL) -> Spectrum:
    """Full validated spectrum of a symmetric operator."""
    w, v, info = jacobi_eigh(op.entries, tol_factor=tol.eig_offdiag_factor,
                             max_sweeps=tol.eig_max_sweeps)
    resid = np.abs(op.entries @ v - v * w).max(axis=0)
    spec = Spectrum(eigenvalues=_ro(w), eigenvectors=_ro(v),
                    residuals=_ro(resid), operator=op,
                    backend=info.backend, sweeps=info.sweeps, tolerances=tol)
    _validate_spectrum(spec, tol)
    return spec


def _validate_spectrum(spec: Spectrum, tol: ToleranceConfig):
    w, v = spec.eigenvalues, spec.eigenvectors
    scale = max(1.0, float(np.abs(w).max())) if w.size else 1.0
    if spec.residuals.max(initial=0.0) > tol.spectrum_residual * scale:
        raise SpectrumInvariantError(
            f"residual {spec.residuals.max():.3e} exceeds bound")
    gram = v.T @ v - np.eye(spec.dim)
    if np.abs(gram).max(initial=0.0) > tol.orthonormality:
        raise SpectrumInvariantError("eigenvectors are not orthonormal")
    kind = spec.operator.kind
    if kind in (LAPLACIAN, PATH_LATTICE):
        if abs(w[0]) > tol.spectrum_residual * scale:
            raise SpectrumInvariantError(
                f"connected Laplacian must have lambda0 = 0, got {w[0]:.3e}")
        u0 = v[:, 0]
        if u0.min() < -1e-8 and u0.max() > 1e-8:
            raise SpectrumInvariantError("Laplacian ground state changes sign")
    if kind == HAMILTONIAN:
        u0 = v[:, 0]
        if u0[np.argmax(np.abs(u0))] < 0:
            u0 = -u0
        if u0.min() <= 0:
            raise SpectrumInvariantError(
                "Hamiltonian ground state must be strictly positive "
                "(Perron-Frobenius) but has a non-positive component")


def _apply_by_adjacency(op: SymmetricOperator, u: np.ndarray) -> np.ndarray:
    """Apply the operator through neighbor sums, bypassing its dense matrix.

    Routes the eigen-recurrence certificate through graph structure instead
    of the assembled entries.
    """
    sub = op.source
    if sub is not None:
        nbr_sum = np.zeros_like(u)
        for ai in range(sub.nbr_local.shape[0]):
            cols = sub.nbr_local[ai]
            keep = cols >= 0
            nbr_sum[keep] += u[cols[keep]]
        out = sub.degrees * u - nbr_sum
        if op.potential is not None:
            out = out + op.potential * u
        return out
    if op.kind == PATH_LATTICE:
        m = u.size
        deg = np.full(m, 2.0)
        if m == 1:
            deg[0] = 0.0
        else:
            deg[0] = deg[-1] = 1.0
        out = deg * u
        out[:-1] -= u[1:]
        out[1:] -= u[:-1]
        return out
    return op.entries @ u


@dataclass(frozen=True)
class RayleighCertificate:
    recurrence_residual: float
    rayleigh_error: float
    ok: bool


def rayleigh_gap_check(spec: Spectrum, op: SymmetricOperator,
                       tol: ToleranceConfig = DEFAULT_TOL) -> RayleighCertificate:
    """Certify the eigen-recurrence componentwise and the Rayleigh quotient.

    (i) every pair satisfies -lambda u(x) = sum_{y~x} (u(y) - u(x)) (plus the
    potential term for Hamiltonians), evaluated through adjacency sums;
    (ii) the quadratic-form Rayleigh quotient of u1 reproduces lambda1.
    """
    worst = 0.0
    for i in range(spec.dim):
        u = spec.vector(i)
        r = _apply_by_adjacency(op, u) - spec.eigenvalues[i] * u
        bad = float(np.abs(r).max())
        if bad > tol.recurrence:
            raise CertificateFailure(
                f"eigen-recurrence fails for pair {i} (residual {bad:.3e})",
                witness=int(np.argmax(np.abs(r))))
        worst = max(worst, bad)

    rq_err = 0.0
    if spec.dim >= 2:
        u1 = spec.vector(1)
        quad = float(u1 @ _apply_by_adjacency(op, u1))
        rq = quad / float(u1 @ u1)
        rq_err = abs(rq - spec.lambda1)
        if rq_err > tol.rayleigh:
            raise CertificateFailure(
                f"Rayleigh quotient {rq:.12g} != lambda1 {spec.lambda1:.12g}",
                witness=None)
    return RayleighCertificate(recurrence_residual=worst,
                               rayleigh_error=rq_err, ok=True)


def _ro(arr):
    arr = np.ascontiguousarray(arr)
    arr.setflags(write=False)
    return arr
