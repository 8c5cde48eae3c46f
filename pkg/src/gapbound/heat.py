"""Heat-equation evolution and the decay certificates behind the gap proofs.

The spectral method is exact up to eigensolve accuracy and is the default;
explicit Euler stepping exists purely as an independent cross-check (its
stability limit comes from a Gershgorin bound, not from the spectrum, so
the two routes share no code path).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import CertificateFailure, InsufficientSpan, UnstableStep
from .graphs import ConvexSubgraph
from .moduli import RatioFunction, modulus_of_continuity
from .operators import (Spectrum, SymmetricOperator, eigendecompose,
                        path_lattice_laplacian)


@dataclass(frozen=True, eq=False)
class HeatTrajectory:
    operator: SymmetricOperator
    times: np.ndarray
    states: np.ndarray            # (len(times), dim)
    method: str
    eta_series: Optional[list]    # ModulusOfContinuity per sample, if graphed
    spectrum: Optional[Spectrum]

    def state(self, j: int) -> np.ndarray:
        return self.states[j]


def default_times(lambda1: float, samples: int = 64) -> np.ndarray:
    """0 followed by log-spaced samples out to 10/lambda1."""
    horizon = 10.0 / lambda1
    grid = np.geomspace(horizon / 1000.0, horizon, samples - 1)
    return np.concatenate([[0.0], grid])


def gershgorin_max(op: SymmetricOperator) -> float:
    """Upper bound on the largest eigenvalue, independent of any eigensolve."""
    a = op.entries
    return float((np.diag(a) + np.abs(a).sum(axis=1) - np.abs(np.diag(a))).max())


def spectral_state(spec: Spectrum, phi0: np.ndarray, t: float) -> np.ndarray:
    """phi(t) = sum_i <u_i, phi0> e^{-lambda_i t} u_i."""
    coeff = spec.eigenvectors.T @ phi0
    return spec.eigenvectors @ (coeff * np.exp(-spec.eigenvalues * t))


def evolve(op: SymmetricOperator, phi0, times, method: str = "spectral",
           dt: Optional[float] = None,
           spectrum: Optional[Spectrum] = None,
           tol: ToleranceConfig = DEFAULT_TOL) -> HeatTrajectory:
    """Solve d(phi)/dt = -Op phi with phi(0) = phi0 on the sample grid."""
    phi0 = np.asarray(phi0, dtype=np.float64)
    times = np.asarray(times, dtype=np.float64)
    if (times < 0).any() or (np.diff(times) <= 0).any():
        raise ValueError("times must be non-negative and strictly increasing")
    if phi0.shape != (op.dim,):
        raise ValueError("initial state has wrong length")

    if method == "spectral":
        spec = spectrum if spectrum is not None else eigendecompose(op, tol)
        states = np.stack([spectral_state(spec, phi0, t) for t in times])
    elif method == "euler":
        lam_max = gershgorin_max(op)
        limit = 1.0 / lam_max if lam_max > 0 else math.inf
        if dt is None:
            dt = 0.5 * limit if math.isfinite(limit) else 1e-2
        if dt >= limit:
            raise UnstableStep(
                f"dt = {dt:g} >= 1/lambda_max bound {limit:g}")
        spec = None
        states = [phi0.copy()]
        cur = phi0.copy()
        t_prev = 0.0
        a = op.entries
        for t in times:
            span = t - t_prev
            if span > 0:
                steps = max(1, int(math.ceil(span / dt)))
                h = span / steps
                for _ in range(steps):
                    cur = cur - h * (a @ cur)
            t_prev = t
            states.append(cur.copy())
        states = np.stack(states[1:])
    else:
        raise ValueError(f"unknown method {method!r}")

    eta_series = None
    if op.source is not None:
        eta_series = [modulus_of_continuity(s, op.source, tol) for s in states]
    return HeatTrajectory(operator=op, times=times, states=states,
                          method=method, eta_series=eta_series, spectrum=spec)


@dataclass(frozen=True)
class DecayCertificate:
    fitted_rate: float
    mu: float
    decades: float
    ok: bool


def decay_rate_check(traj: HeatTrajectory, mu: float,
                     tol: ToleranceConfig = DEFAULT_TOL) -> DecayCertificate:
    """Fit the decay exponent of |eta|(t) and certify rate >= mu - margin.

    The trajectory must span at least three decades of decay; the fit is
    log-linear least squares on the l2 norm of the modulus table.
    """
    if traj.eta_series is None:
        raise ValueError("trajectory has no modulus series (no graph source)")
    norms = np.array([np.linalg.norm(e.values[1:]) for e in traj.eta_series])
    keep = norms > 0
    if keep.sum() < 3:
        raise InsufficientSpan("fewer than 3 samples with nonzero modulus")
    t = traj.times[keep]
    n = norms[keep]
    decades = math.log10(n.max() / n.min()) if n.min() > 0 else math.inf
    if decades < 3.0:
        raise InsufficientSpan(
            f"modulus decays over {decades:.2f} decades; need >= 3")
    slope, _ = np.polyfit(t, np.log(n), 1)
    rate = -float(slope)
    ok = rate >= mu - tol.decay_margin
    if not ok:
        raise CertificateFailure(
            f"fitted decay rate {rate:.9g} < mu - margin = "
            f"{mu - tol.decay_margin:.9g}", witness=rate)
    return DecayCertificate(fitted_rate=rate, mu=mu, decades=decades, ok=True)


@dataclass(frozen=True)
class InequalityCertificate:
    checked: int
    worst_margin: float
    ok: bool


def _eta_lattice_vector(spec: Spectrum, sub: ConvexSubgraph, phi0, t, coords,
                        tol: ToleranceConfig):
    eta = modulus_of_continuity(spectral_state(spec, phi0, t), sub, tol)
    return np.array([eta.at(int(s)) for s in coords])


def mocheat_inequality_check(traj: HeatTrajectory, sub: ConvexSubgraph,
                             dt: Optional[float] = None,
                             tol: ToleranceConfig = DEFAULT_TOL) -> InequalityCertificate:
    """Certify d(eta)/dt <= -L_P eta on the parity lattice at each sample.

    The time derivative is a centered difference with the tolerance taken
    from a third-difference estimate (the Taylor remainder of the centered
    scheme), so the certificate is exact up to discretization.
    """
    if traj.spectrum is None:
        raise ValueError("certificate needs a spectral trajectory")
    spec = traj.spectrum
    d = sub.diameter_S
    if d < 1:
        return InequalityCertificate(checked=0, worst_margin=0.0, ok=True)
    parity = "even" if d % 2 == 0 else "odd"
    lattice = path_lattice_laplacian(d, parity)
    coords = lattice.coords
    lp = lattice.entries
    phi0 = traj.states[0]
    if dt is None:
        lam_max = float(spec.eigenvalues[-1])
        dt = 1e-3 / lam_max if lam_max > 0 else 1e-3

    checked = 0
    worst = math.inf
    for t in traj.times:
        if t < 2 * dt:
            continue
        samples = [_eta_lattice_vector(spec, sub, phi0, t + k * dt, coords, tol)
                   for k in (-2, -1, 0, 1, 2)]
        em2, em1, e0, ep1, ep2 = samples
        deta = (ep1 - em1) / (2 * dt)
        third = (ep2 - 2 * ep1 + 2 * em1 - em2) / (2 * dt ** 3)
        tol_dt = np.abs(third) * dt * dt / 6.0 * 4.0 + 1e-12
        rhs = -(lp @ e0)
        for i, s in enumerate(coords):
            if s <= 0:
                continue
            margin = rhs[i] + tol_dt[i] - deta[i]
            checked += 1
            worst = min(worst, float(margin))
            if margin < 0:
                raise CertificateFailure(
                    f"d(eta)/dt > -L_P eta at s={int(s)}, t={t:.6g} "
                    f"(violation {-margin:.3e})", witness=(int(s), float(t)))
    return InequalityCertificate(checked=checked,
                                 worst_margin=worst if checked else 0.0, ok=True)


def eta2_contraction_check(traj: HeatTrajectory, sub: ConvexSubgraph,
                           dt: Optional[float] = None,
                           tol: ToleranceConfig = DEFAULT_TOL) -> InequalityCertificate:
    """Hypercube-local certificate d(eta(2))/dt <= -2 eta(2) at each sample."""
    if traj.spectrum is None:
        raise ValueError("certificate needs a spectral trajectory")
    spec = traj.spectrum
    phi0 = traj.states[0]
    s2 = min(2, sub.diameter_S)
    if dt is None:
        lam_max = float(spec.eigenvalues[-1])
        dt = 1e-3 / lam_max if lam_max > 0 else 1e-3

    def eta2(t):
        eta = modulus_of_continuity(spectral_state(spec, phi0, t), sub, tol)
        return eta.at(s2)

    checked = 0
    worst = math.inf
    for t in traj.times:
        if t < 2 * dt:
            continue
        vals = [eta2(t + k * dt) for k in (-2, -1, 0, 1, 2)]
        deta = (vals[3] - vals[1]) / (2 * dt)
        third = (vals[4] - 2 * vals[3] + 2 * vals[1] - vals[0]) / (2 * dt ** 3)
        tol_dt = abs(third) * dt * dt / 6.0 * 4.0 + 1e-12
        margin = -2.0 * vals[2] + tol_dt - deta
        checked += 1
        worst = min(worst, margin)
        if margin < 0:
            raise CertificateFailure(
                f"d(eta(2))/dt > -2 eta(2) at t={t:.6g}", witness=float(t))
    return InequalityCertificate(checked=checked,
                                 worst_margin=worst if checked else 0.0, ok=True)


@dataclass(frozen=True)
class RatioCertificate:
    stationary_residual: float
    evolution_residual: float
    ok: bool


def ratio_evolution_check(h: SymmetricOperator, spec: Spectrum, times,
                          dt: Optional[float] = None,
                          tol: ToleranceConfig = DEFAULT_TOL) -> RatioCertificate:
    """Certify the ground-state-weighted evolution law of the ratio u1/u0.

    (i) along the trajectory, d(f)/dt matches the weighted difference sum to
    discretization accuracy; (ii) at t = 0, -gamma f(x) equals that sum
    exactly up to the stationary tolerance.
    """
    sub = h.source
    if sub is None:
        raise ValueError("operator must come from a graph")
    gamma = spec.gap
    ratio0 = RatioFunction.from_spectrum(spec, sub)
    weighted0, _ = ratio0.vertex_sums()
    stationary = float(np.abs(-gamma * ratio0.f - weighted0).max())
    if stationary > tol.ratio_identity:
        raise CertificateFailure(
            f"stationary ratio identity residual {stationary:.3e}",
            witness=int(np.argmax(np.abs(-gamma * ratio0.f - weighted0))))

    u0, u1 = spec.vector(0), spec.vector(1)
    if u0[np.argmax(np.abs(u0))] < 0:
        u0 = -u0
    lam_max = float(spec.eigenvalues[-1])
    if dt is None:
        dt = 1e-3 / lam_max if lam_max > 0 else 1e-3

    def ratio_at(t):
        a = spectral_state(spec, u0, t)
        b = spectral_state(spec, u1, t)
        return RatioFunction.from_vectors(a, b, sub)

    worst = 0.0
    times = np.asarray(times, dtype=np.float64)
    for t in times:
        if t < dt:
            continue
        rm = ratio_at(t - dt)
        r0 = ratio_at(t)
        rp = ratio_at(t + dt)
        dfdt = (rp.f - rm.f) / (2 * dt)
        weighted, _ = r0.vertex_sums()
        fscale = float(np.abs(r0.f).max())
        tol_dt = (gamma ** 3) * fscale * dt * dt / 6.0 * 4.0 + 1e-10
        resid = float(np.abs(dfdt - weighted).max())
        worst = max(worst, resid)
        if resid > tol_dt:
            raise CertificateFailure(
                f"ratio evolution residual {resid:.3e} > {tol_dt:.3e} at "
                f"t={t:.6g}", witness=float(t))
    return RatioCertificate(stationary_residual=stationary,
                            evolution_residual=worst, ok=True)
