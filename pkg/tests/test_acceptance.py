"""Acceptance suite: one test per criterion, each at its stated tolerance.

A pass/fail line per criterion is printed in the terminal summary (see
conftest). Every spectrum computed here goes through the eigen-recurrence
certificate, which the final criterion reports on.
"""

import math
import time

import numpy as np
import pytest

import gapbound as gb
from gapbound.bounds import bound_thm1, bound_thm2, bound_thm3, bound_thm4
from gapbound.errors import BoundUnavailable
from gapbound.families import hypercube_graph
from gapbound.graphs import convex_closure, induce_subgraph, is_strongly_convex
from gapbound.heat import (decay_rate_check, default_times,
                           eta2_contraction_check, evolve, gershgorin_max,
                           mocheat_inequality_check, ratio_evolution_check)
from gapbound.moduli import (RatioFunction, log_concavity,
                             modulus_of_concavity)
from gapbound.operators import (dirichlet_hamiltonian, eigendecompose,
                                laplacian, rayleigh_gap_check)

from conftest import record_criterion

CERTIFIED = {"count": 0, "worst": 0.0}


def eig(op):
    """Eigendecompose and certify the recurrence; counts toward criterion 8."""
    spec = eigendecompose(op)
    cert = rayleigh_gap_check(spec, op)
    CERTIFIED["count"] += 1
    CERTIFIED["worst"] = max(CERTIFIED["worst"], cert.recurrence_residual)
    return spec


def test_criterion_1_path_tightness():
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(2, 22):
        sub = gb.path_instance(n)
        spec = eig(laplacian(sub))
        slack = spec.lambda1 - bound_thm1(n - 1)
        worst = max(worst, abs(slack))
        assert abs(slack) <= 1e-9, f"path({n})"
    elapsed = time.perf_counter() - t0
    assert elapsed < 1.0
    record_criterion(f"criterion 1 path tightness n=2..21: PASS "
                     f"(max |slack| {worst:.2e}, {elapsed:.2f}s)")


def test_criterion_2_hypercube_tightness():
    if gb.KERNEL_BACKEND != "cython":
        pytest.skip("the 1024-vertex dense eigensolve inside the 60 s budget "
                    "presumes the compiled kernel; build the extension to run "
                    "this criterion")
    t0 = time.perf_counter()
    worst = 0.0
    for n in range(1, 11):
        sub = gb.hypercube_instance(n)
        spec = eig(laplacian(sub))
        assert abs(spec.gap - 2.0) <= 1e-9, f"Q{n}"
        assert bound_thm2(sub) == 2.0
        worst = max(worst, abs(spec.gap - 2.0))
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0
    record_criterion(f"criterion 2 hypercube tightness n=1..10: PASS "
                     f"(max |gap-2| {worst:.2e}, {elapsed:.1f}s)")


def _random_convex_subgraph(rng, hosts):
    """Subcube by mask, or a set grown by neighbor-closure steps."""
    n = int(rng.integers(2, 9))
    host = hosts[n]
    if rng.random() < 0.5:
        mask = [int(rng.integers(0, 2)) if rng.random() < 0.55 else None
                for _ in range(n)]
        if not any(b is None for b in mask):
            mask[int(rng.integers(0, n))] = None
        ids = np.arange(1 << n)
        keep = np.ones(ids.size, dtype=bool)
        for i, b in enumerate(mask):
            if b is not None:
                keep &= ((ids >> i) & 1) == b
        vset = ids[keep]
    else:
        current = {int(rng.integers(0, 1 << n))}
        for _ in range(int(rng.integers(1, 4))):
            v = int(next(iter(current)))
            nbr = v ^ (1 << int(rng.integers(0, n)))
            current.add(nbr)
            current = set(convex_closure(host, sorted(current)).tolist())
            if len(current) >= 64:
                break
        vset = np.array(sorted(current))
        if vset.size < 2:
            nbr = int(vset[0]) ^ 1
            vset = convex_closure(host, [int(vset[0]), nbr])
    return induce_subgraph(host, vset)


def test_criterion_3_thm1_soundness_sweep():
    t0 = time.perf_counter()
    worst_slack = math.inf
    for n in range(3, 31):
        sub = gb.cycle_instance(n)
        spec = eig(laplacian(sub))
        slack = spec.lambda1 - bound_thm1(sub.diameter_S)
        worst_slack = min(worst_slack, slack)
        assert slack >= -1e-9, f"C{n}"

    rng = np.random.default_rng(0xACCE03)
    hosts = {n: hypercube_graph(n) for n in range(2, 9)}
    for i in range(200):
        sub = _random_convex_subgraph(rng, hosts)
        res = is_strongly_convex(sub)
        assert res.convex, f"sample {i} not convex"
        spec = eig(laplacian(sub))
        slack = spec.lambda1 - bound_thm1(max(sub.diameter_S, 1))
        worst_slack = min(worst_slack, slack)
        assert slack >= -1e-9, f"sample {i}"
    elapsed = time.perf_counter() - t0
    record_criterion(f"criterion 3 Thm1 soundness (cycles 3..30 + 200 convex "
                     f"subgraphs of Q2..Q8): PASS (min slack {worst_slack:.2e}, "
                     f"{elapsed:.1f}s)")


def _random_subcube(rng, host, n):
    mask = [int(rng.integers(0, 2)) if rng.random() < 0.5 else None
            for _ in range(n)]
    if not any(b is None for b in mask):
        mask[int(rng.integers(0, n))] = None
    ids = np.arange(1 << n)
    keep = np.ones(ids.size, dtype=bool)
    for i, b in enumerate(mask):
        if b is not None:
            keep &= ((ids >> i) & 1) == b
    return induce_subgraph(host, ids[keep])


def test_criterion_4_thm3_soundness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0xACCE04)
    hosts = {n: hypercube_graph(n) for n in range(2, 7)}
    evaluated = 0
    unavailable = 0
    zero_checked = 0
    worst_slack = math.inf
    for i in range(200):
        if i % 2 == 0:
            sub = gb.path_instance(int(rng.integers(2, 13)))
        else:
            n = int(rng.integers(2, 7))
            sub = _random_subcube(rng, hosts[n], n)
        zero_w = i % 10 == 0
        w = np.zeros(sub.n_vertices) if zero_w \
            else rng.uniform(0, 5, size=sub.n_vertices)
        spec = eig(dirichlet_hamiltonian(sub, w))
        try:
            value, const = bound_thm3(sub, spec)
        except BoundUnavailable:
            unavailable += 1
            continue
        evaluated += 1
        slack = spec.gap - value
        worst_slack = min(worst_slack, slack)
        assert slack >= -1e-9, f"instance {i}"
        if zero_w:
            zero_checked += 1
            assert abs(const.value - 1.0) <= 1e-12, f"instance {i}: C != 1"
    assert evaluated >= 180           # availability is the norm, not the exception
    assert zero_checked == 20
    elapsed = time.perf_counter() - t0
    record_criterion(f"criterion 4 Thm3 soundness (200 instances, W in [0,5]): "
                     f"PASS (min slack {worst_slack:.2e}, "
                     f"{unavailable} unavailable, {elapsed:.1f}s)")


def test_criterion_5_thm4_soundness():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0xACCE05)
    worst_slack = math.inf
    evaluated = 0
    for i in range(100):
        n = int(rng.integers(2, 6))
        sub = gb.hypercube_instance(n)
        w = rng.uniform(0, 5, size=sub.n_vertices)
        spec = eig(dirichlet_hamiltonian(sub, w))
        try:
            value, _ = bound_thm4(sub, spec)
        except BoundUnavailable:
            continue
        evaluated += 1
        slack = spec.gap - value
        worst_slack = min(worst_slack, slack)
        assert slack >= -1e-9, f"instance {i} (Q{n})"
    assert evaluated >= 95
    elapsed = time.perf_counter() - t0
    record_criterion(f"criterion 5 Thm4 soundness (100 instances on Q2..Q5): "
                     f"PASS (min slack {worst_slack:.2e}, {elapsed:.1f}s)")


def _random_convex_potential(rng, n):
    # keep the total potential range moderate: very steep wells drive the
    # ground-state tail below the eigensolver noise floor (~1e-13), where
    # the strict-positivity invariant is no longer numerically decidable
    span = max((n - 1) ** 2, 1)
    a = float(rng.uniform(0.05, min(1.0, 25.0 / span)))
    b = float(rng.uniform(0, n - 1))
    c = float(rng.uniform(0, 1.0))
    x = np.arange(float(n))
    return a * (x - b) ** 2 + c * np.abs(x - b)


def test_criterion_6_thm56_soundness_and_ordering():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0xACCE06)
    passed = 0
    attempts = 0
    worst_slack = math.inf
    ordered = 0
    exact_weak = 0
    while passed < 100:
        attempts += 1
        assert attempts < 400, "log-concavity filter rejected too many instances"
        n = int(rng.integers(2, 16))
        sub = gb.path_instance(n)
        w = _random_convex_potential(rng, n)
        spec = eig(dirichlet_hamiltonian(sub, w))
        u0 = spec.vector(0)
        if u0[np.argmax(np.abs(u0))] < 0:
            u0 = -u0
        g = np.log(u0)
        if not log_concavity(g, sub).holds:
            continue
        omega = modulus_of_concavity(g, sub)
        if not omega.is_nonnegative(1e-12):
            continue
        d = sub.diameter_S
        v5, weak = gb.bound_thm5(omega, d)
        v6, eq1 = gb.bound_thm6(omega, d)
        s5, s6 = spec.gap - v5, spec.gap - v6
        worst_slack = min(worst_slack, s5, s6)
        assert s5 >= -1e-9 and s6 >= -1e-9, f"path({n})"
        if omega.is_convex(1e-12):
            ordered += 1
            assert v6 >= v5 - 1e-12
        if omega.omega_bar == 0.0:
            exact_weak += 1
            assert v5 == weak == 4.0 * (1.0 - math.cos(math.pi / (2 * d + 1)))
        passed += 1
    elapsed = time.perf_counter() - t0
    record_criterion(f"criterion 6 Thm5/6 soundness (100 log-concave paths): "
                     f"PASS (min slack {worst_slack:.2e}, ordering checked on "
                     f"{ordered}, exact weak member on {exact_weak}, {elapsed:.1f}s)")


def test_criterion_7_heat_mechanism():
    t0 = time.perf_counter()
    # decay and lattice-comparison certificates on the two reference graphs
    sub = gb.path_instance(5)
    lap = laplacian(sub)
    spec = eig(lap)
    traj = evolve(lap, spec.vector(1), default_times(spec.lambda1),
                  spectrum=spec)
    decay = decay_rate_check(traj, mu=bound_thm1(4))
    assert decay.fitted_rate >= bound_thm1(4) - 1e-6
    moc = mocheat_inequality_check(traj, sub)
    assert moc.ok and moc.checked > 0

    sub = gb.hypercube_instance(3)
    lap = laplacian(sub)
    spec = eig(lap)
    traj = evolve(lap, spec.vector(1), default_times(spec.gap), spectrum=spec)
    decay_q = decay_rate_check(traj, mu=2.0)
    assert decay_q.fitted_rate >= 2.0 - 1e-6
    moc_q = mocheat_inequality_check(traj, sub)
    assert moc_q.ok
    eta2 = eta2_contraction_check(traj, sub)
    assert eta2.ok and eta2.checked > 0

    # stationary ratio identity on 50 random Hamiltonians
    rng = np.random.default_rng(0xACCE07)
    hosts = {n: hypercube_graph(n) for n in (2, 3, 4)}
    worst = 0.0
    for i in range(50):
        kind = i % 3
        if kind == 0:
            sub = gb.path_instance(int(rng.integers(2, 9)))
        elif kind == 1:
            sub = gb.cycle_instance(int(rng.integers(3, 9)))
        else:
            n = int(rng.integers(2, 5))
            sub = _random_subcube(rng, hosts[n], n)
        w = rng.uniform(0, 5, size=sub.n_vertices)
        ham = dirichlet_hamiltonian(sub, w)
        spec = eig(ham)
        ratio = RatioFunction.from_spectrum(spec, sub)
        weighted, _ = ratio.vertex_sums()
        resid = float(np.abs(-spec.gap * ratio.f - weighted).max())
        worst = max(worst, resid)
        assert resid <= 1e-8, f"instance {i}"
        if i % 10 == 0:
            cert = ratio_evolution_check(ham, spec, np.array([0.05, 0.2]))
            assert cert.ok
    elapsed = time.perf_counter() - t0
    record_criterion(f"criterion 7 heat mechanism: PASS (rates "
                     f"{decay.fitted_rate:.6f}>=mu(path5), "
                     f"{decay_q.fitted_rate:.6f}>=2(Q3), max Cor-residual "
                     f"{worst:.2e} over 50 H, {elapsed:.1f}s)")


def test_criterion_8_oracle_equivalence():
    t0 = time.perf_counter()
    rng = np.random.default_rng(0xACCE08)
    hosts = {n: hypercube_graph(n) for n in (2, 3)}
    worst = 0.0
    for i in range(20):
        kind = i % 3
        if kind == 0:
            sub = gb.path_instance(int(rng.integers(2, 8)))
        elif kind == 1:
            sub = gb.cycle_instance(int(rng.integers(3, 8)))
        else:
            n = int(rng.integers(2, 4))
            sub = _random_subcube(rng, hosts[n], n)
        w = rng.uniform(0, 2, size=sub.n_vertices)
        ham = dirichlet_hamiltonian(sub, w)
        lam = gershgorin_max(ham)
        times = np.array([0.1, 0.25, 0.5]) / lam
        phi0 = rng.normal(size=sub.n_vertices)
        spectral = evolve(ham, phi0, times)
        euler = evolve(ham, phi0, times, method="euler",
                       dt=times[-1] / 250000)
        diff = float(np.abs(spectral.states - euler.states).max())
        worst = max(worst, diff)
        assert diff <= 1e-6, f"instance {i}"
    elapsed = time.perf_counter() - t0
    assert CERTIFIED["count"] >= 600  # criteria 1-7 all route through eig()
    record_criterion(f"criterion 8 oracle equivalence: PASS (max spectral-vs-"
                     f"euler diff {worst:.2e} on 20 instances; recurrence "
                     f"certificate passed on {CERTIFIED['count']} spectra, "
                     f"worst residual {CERTIFIED['worst']:.2e}, {elapsed:.1f}s)")
