"""Moduli of continuity and concavity, extremal pairs, and the ratio constant.

All pair/triple scans are exhaustive over the dense distance matrix; sizes
here are desk-scale by construction. Conventions:

- eta(s) is the supremum of f(y) - f(x) over pairs at distance <= s,
  extended antisymmetrically with eta(D+1) = eta(D+2) = eta(D);
- omega(s) is the infimum of (g(a^-1 y) - g(y) + g(a x) - g(x)) / 2 over
  pairs at distance s with the generator a stepping from x toward y along
  a shortest path (which forces a^-1 y one step from y toward x), with the
  boundary convention omega(D+1) = 0;
- the first difference across the Dirichlet boundary is zero, so boundary
  terms drop out of every vertex sum.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .config import DEFAULT_TOL, ToleranceConfig
from .errors import EmptyAfterSkips, NoAdmissibleTriple
from .graphs import ConvexSubgraph
from .operators import Spectrum


@dataclass(frozen=True, eq=False)
class ModulusOfContinuity:
    sub: ConvexSubgraph
    f: np.ndarray
    values: np.ndarray            # eta(s) for s = 0..D
    achievers: dict               # s > 0 -> (r, 2) local (y, x) pairs
    tie_tol: float

    @property
    def diameter(self) -> int:
        return self.values.size - 1

    def at(self, s: int) -> float:
        """eta(s) with antisymmetry and the eta(D+2)=eta(D+1)=eta(D) extension."""
        if s == 0:
            return 0.0
        mag = min(abs(s), self.diameter)
        return math.copysign(1.0, s) * float(self.values[mag])

    def table(self) -> np.ndarray:
        """eta over [-D, D] as a vector (index i -> s = i - D)."""
        d = self.diameter
        pos = self.values[1:]
        return np.concatenate([-pos[::-1], [0.0], pos])


@dataclass(frozen=True, eq=False)
class ModulusOfConcavity:
    sub: ConvexSubgraph
    g: np.ndarray
    values: np.ndarray            # omega(s) for s = 1..D; NaN if undefined
    achievers: dict               # s -> (r, 3) triples (y, x, generator)
    admissibility: str

    @property
    def diameter(self) -> int:
        return self.values.size

    @property
    def defined(self) -> np.ndarray:
        return ~np.isnan(self.values)

    def at(self, s: int) -> float:
        """omega(s) for s in [1, D]; omega(D+1) = 0 by convention."""
        if s == self.diameter + 1:
            return 0.0
        return float(self.values[s - 1])

    @property
    def omega_bar(self) -> float:
        """inf_s omega(s) over the defined distance classes."""
        vals = self.values[self.defined]
        if vals.size == 0:
            raise NoAdmissibleTriple("no distance class admits a triple")
        return float(vals.min())

    def is_nonnegative(self, slack: float = 1e-12) -> bool:
        vals = self.values[self.defined]
        return bool((vals >= -slack).all())

    def is_convex(self, slack: float = 1e-12) -> bool:
        """Discrete convexity over s = 1..D+1 including omega(D+1) = 0."""
        if not self.defined.all():
            return False
        ext = np.append(self.values, 0.0)
        if ext.size < 3:
            return True
        second = ext[2:] - 2 * ext[1:-1] + ext[:-2]
        return bool((second >= -slack).all())


@dataclass(frozen=True, eq=False)
class RatioFunction:
    """f = u1/u0 and g = log(u0) on the subgraph vertices."""

    sub: ConvexSubgraph
    u0: np.ndarray
    u1: np.ndarray
    f: np.ndarray
    g: np.ndarray

    @classmethod
    def from_spectrum(cls, spec: Spectrum, sub: ConvexSubgraph,
                      which: int = 1) -> "RatioFunction":
        return cls.from_vectors(spec.vector(0), spec.vector(which), sub)

    @classmethod
    def from_vectors(cls, u0, u1, sub: ConvexSubgraph) -> "RatioFunction":
        u0 = np.asarray(u0, dtype=np.float64)
        u1 = np.asarray(u1, dtype=np.float64)
        if u0[np.argmax(np.abs(u0))] < 0:
            u0 = -u0
        if u0.min() <= 0:
            raise ValueError("ground state must be strictly positive on V(S)")
        return cls(sub=sub, u0=u0, u1=u1, f=u1 / u0, g=np.log(u0))

    def delta(self, ai: int) -> np.ndarray:
        """Delta_a f per vertex for generator index ai; zero across the
        Dirichlet boundary."""
        cols = self.sub.nbr_local[ai]
        out = np.zeros_like(self.f)
        keep = cols >= 0
        out[keep] = self.f[cols[keep]] - self.f[keep.nonzero()[0]]
        return out

    def vertex_sums(self):
        """Per-vertex (weighted, plain) difference sums.

        weighted[v] = sum_a Delta_a f(v) e^{g(av)-g(v)} and
        plain[v] = sum_a Delta_a f(v), with Delta_a f zero across the
        boundary. The weight is computed as the ratio u0(av)/u0(v).
        """
        sub, f, u0 = self.sub, self.f, self.u0
        m = sub.n_vertices
        weighted = np.zeros(m)
        plain = np.zeros(m)
        for ai in range(sub.nbr_local.shape[0]):
            cols = sub.nbr_local[ai]
            keep = cols >= 0
            df = f[cols[keep]] - f[keep.nonzero()[0]]
            plain[keep] += df
            weighted[keep] += df * (u0[cols[keep]] / u0[keep.nonzero()[0]])
        return weighted, plain


def modulus_of_continuity(f, sub: ConvexSubgraph,
                          tol: ToleranceConfig = DEFAULT_TOL) -> ModulusOfContinuity:
    """Exact modulus by exhaustive pair scan, with achiever bookkeeping."""
    f = np.asarray(f, dtype=np.float64)
    d = sub.diameter_S
    dist = sub.dist_S
    diff = f[:, None] - f[None, :]

    values = np.zeros(d + 1)
    for s in range(1, d + 1):
        cls = diff[dist == s]
        here = cls.max() if cls.size else -np.inf
        values[s] = max(values[s - 1], here)

    tie = tol.tie_factor * max(1.0, abs(values[d]))
    achievers = {}
    for s in range(1, d + 1):
        mask = (dist <= s) & (dist > 0) & (diff >= values[s] - tie)
        achievers[s] = np.argwhere(mask).astype(np.int32)
    return ModulusOfContinuity(sub=sub, f=f, values=values,
                               achievers=achievers, tie_tol=tie)


def modulus_of_concavity(g, sub: ConvexSubgraph,
                         admissibility: str = "step") -> ModulusOfConcavity:
    """Exact infimum per distance class over admissible (y, x, a) triples.

    "step": a moves x one step along a shortest path toward y, i.e.
    d(ax, y) = d(x, y) - 1 (implies the a^2-contraction condition).
    "raw": the literal contraction condition d(a^2 x, y) <= d(x, y); kept
    for cross-comparison, identical to "step" on path graphs.
    """
    if admissibility not in ("step", "raw"):
        raise ValueError(f"unknown admissibility {admissibility!r}")
    g = np.asarray(g, dtype=np.float64)
    sub_d = sub.diameter_S
    host = sub.host
    group = host.group
    gens = list(host.gens)
    hd = sub.host_dist()
    m = sub.n_vertices

    gen_index = {a: i for i, a in enumerate(gens)}

    def triple_values(ai):
        """(admit mask, value matrix) for generator index ai, indexed [y, x]."""
        a = gens[ai]
        inv_ai = gen_index[group.inv(a)]
        ax = sub.nbr_local[ai]          # local of a*x per local x, -1 outside
        ainv_y = sub.nbr_local[inv_ai]  # local of a^-1*y per local y
        ok_x = ax >= 0
        ok_y = ainv_y >= 0
        if admissibility == "step":
            # d(ax, y) == d(x, y) - 1, distances via the host metric
            dax = np.full((m, m), -2, dtype=np.int64)
            dax[:, ok_x] = hd[:, ax[ok_x]]
            admit = dax == hd - 1
        else:
            a2x_host = host.act[ai, host.act[ai, sub.vset]]   # a*a*x host ids
            da2 = host.dist[np.ix_(sub.vset, a2x_host)]       # [y, x]
            admit = (da2 <= hd) & ok_x[None, :]
        admit = admit & ok_y[:, None] & (hd >= 1)
        val = np.full((m, m), np.nan)
        if admit.any():
            yy, xx = np.nonzero(admit)
            val[yy, xx] = 0.5 * ((g[ainv_y[yy]] - g[yy]) + (g[ax[xx]] - g[xx]))
        return admit, val

    best = np.full(sub_d, np.nan)
    per_gen = [triple_values(ai) for ai in range(len(gens))]
    for admit, val in per_gen:
        for s in range(1, sub_d + 1):
            sel = admit & (hd == s)
            if not sel.any():
                continue
            vmin = val[sel].min()
            if np.isnan(best[s - 1]) or vmin < best[s - 1]:
                best[s - 1] = vmin

    achievers = {s: [] for s in range(1, sub_d + 1)}
    for ai, (admit, val) in enumerate(per_gen):
        a = gens[ai]
        for s in range(1, sub_d + 1):
            if np.isnan(best[s - 1]):
                continue
            tie = 1e-12 * max(1.0, abs(best[s - 1]))
            sel = admit & (hd == s) & (val <= best[s - 1] + tie)
            for y, x in np.argwhere(sel):
                achievers[s].append((int(y), int(x), int(a)))
    achievers = {s: np.array(sorted(t), dtype=np.int64).reshape(-1, 3)
                 for s, t in achievers.items()}
    return ModulusOfConcavity(sub=sub, g=g, values=best, achievers=achievers,
                              admissibility=admissibility)


def extremal_pairs(eta: ModulusOfContinuity) -> np.ndarray:
    """All ordered pairs (y, x) with f(y) - f(x) = eta(d(y, x)), up to ties."""
    sub, f = eta.sub, eta.f
    dist = sub.dist_S
    diff = f[:, None] - f[None, :]
    eta_at = eta.values[dist]
    mask = (dist > 0) & (diff >= eta_at - eta.tie_tol)
    return np.argwhere(mask).astype(np.int32)


@dataclass(frozen=True, eq=False)
class RatioConstant:
    value: float
    restrict: str
    pairs: np.ndarray             # admitted (y, x) pairs
    ratios: np.ndarray            # per admitted pair
    skipped: np.ndarray           # pairs dropped for a near-zero denominator


def c_u0(ratio: RatioFunction, xi: np.ndarray, sub: ConvexSubgraph,
         restrict: str = "all",
         tol: ToleranceConfig = DEFAULT_TOL,
         eta: Optional[ModulusOfContinuity] = None) -> RatioConstant:
    """Ground-state-weighted ratio constant over extremal pairs.

    restrict="all" uses the supplied extremal pairs; "distance_le_2" uses
    the achievers of eta(2) instead (the hypercube-local variant), which
    requires `eta`. Pairs whose plain-difference denominator is within
    `tol.denominator_zero` of zero are skipped and reported.
    """
    if restrict == "distance_le_2":
        if eta is None:
            raise ValueError("distance_le_2 restriction needs the modulus")
        s2 = min(2, eta.diameter)
        pairs = eta.achievers[s2]
    elif restrict == "all":
        pairs = xi
    else:
        raise ValueError(f"unknown restriction {restrict!r}")

    weighted, plain = ratio.vertex_sums()
    y, x = pairs[:, 0], pairs[:, 1]
    den = plain[y] - plain[x]
    num = weighted[y] - weighted[x]
    keep = np.abs(den) >= tol.denominator_zero
    if not keep.any():
        raise EmptyAfterSkips(
            f"all {pairs.shape[0]} extremal pairs had |denominator| < "
            f"{tol.denominator_zero:g}")
    ratios = num[keep] / den[keep]
    return RatioConstant(value=float(ratios.min()), restrict=restrict,
                         pairs=pairs[keep], ratios=ratios,
                         skipped=pairs[~keep])


@dataclass(frozen=True, eq=False)
class GradTables:
    """Forward difference of eta and backward cosh-difference of omega."""

    s: np.ndarray                 # 1..D
    grad_eta: np.ndarray          # eta(s) - eta(s-1)
    dcosh_omega: np.ndarray       # cosh(omega(s)) - cosh(omega(s+1)), omega(D+1)=0


def grad_ops(eta: ModulusOfContinuity, omega: ModulusOfConcavity) -> GradTables:
    d = omega.diameter
    s = np.arange(1, d + 1)
    grad_eta = np.array([eta.at(int(v)) - eta.at(int(v) - 1) for v in s])
    dcosh = np.array([math.cosh(omega.at(int(v))) - math.cosh(omega.at(int(v) + 1))
                      for v in s])
    return GradTables(s=s, grad_eta=grad_eta, dcosh_omega=dcosh)


@dataclass(frozen=True)
class ConcavityReport:
    holds: bool
    worst: float
    witness: Optional[int]        # local vertex index


def log_concavity(g, sub: ConvexSubgraph,
                  tol: ToleranceConfig = DEFAULT_TOL) -> ConcavityReport:
    """Discrete log-concavity predicate: sum_a (g(ay) - g(y)) <= 0 at every
    interior vertex. Vertices adjacent to the boundary satisfy it trivially
    (the boundary value is -infinity) and are not tested."""
    g = np.asarray(g, dtype=np.float64)
    interior = (sub.nbr_local >= 0).all(axis=0)
    if not interior.any():
        return ConcavityReport(holds=True, worst=0.0, witness=None)
    idx = np.nonzero(interior)[0]
    sums = np.zeros(idx.size)
    for ai in range(sub.nbr_local.shape[0]):
        sums += g[sub.nbr_local[ai, idx]] - g[idx]
    scale = max(1.0, float(np.abs(g[idx]).max()))
    worst = float(sums.max())
    holds = worst <= tol.concavity_slack * scale
    witness = int(idx[np.argmax(sums)]) if not holds else None
    return ConcavityReport(holds=holds, worst=worst, witness=witness)
