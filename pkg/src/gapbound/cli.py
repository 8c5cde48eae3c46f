"""Batch front end: validate instance specs, run analyses, write reports.

Exit status: 0 when every requested verification holds, 1 on a verification
failure (witnesses land in the report), 2 on a spec/validation error.
"""

import argparse
import concurrent.futures
import json
import os
import sys
from pathlib import Path

import numpy as np

from .bounds import verify_all
from .config import DEFAULT_TOL
from .errors import CertificateFailure, GapboundError, SpecValidationError
from .families import (cycle_instance, hypercube_instance, path_instance,
                       quadratic_potential, subcube_instance)
from .graphs import induce_subgraph, build_cayley, is_strongly_convex
from .groups import build_group, generator_set
from .heat import (decay_rate_check, default_times, evolve,
                   mocheat_inequality_check, ratio_evolution_check)
from .moduli import (RatioFunction, extremal_pairs, log_concavity,
                     modulus_of_concavity, modulus_of_continuity)
from .operators import eigendecompose, rayleigh_gap_check
from .bounds import build_operator, is_path_graph

SCHEMA = "gapbound/1"
ANALYSES = ("spectrum", "bounds", "moduli", "heat")


# -- spec validation ----------------------------------------------------------

def _require_keys(obj, allowed, where):
    unknown = set(obj) - set(allowed)
    if unknown:
        raise SpecValidationError(f"unknown keys in {where}: {sorted(unknown)}")


def _build_subgraph(inst):
    _require_keys(inst, {"family", "group", "generators", "subgraph"}, "instance")
    fam = inst.get("family")
    if fam is not None:
        if any(k in inst for k in ("group", "generators", "subgraph")):
            raise SpecValidationError("family excludes explicit group fields")
        _require_keys(fam, {"name", "n", "mask"}, "instance.family")
        name = fam.get("name")
        if name == "path":
            return path_instance(int(fam["n"]))
        if name == "cycle":
            return cycle_instance(int(fam["n"]))
        if name == "hypercube":
            return hypercube_instance(int(fam["n"]))
        if name == "subcube":
            return subcube_instance(fam["mask"])
        raise SpecValidationError(f"unknown family {name!r}")
    if "group" not in inst or "generators" not in inst:
        raise SpecValidationError("instance needs either a family or "
                                  "group + generators")
    group = build_group(inst["group"])
    gens = generator_set(group, inst["generators"])
    graph = build_cayley(group, gens)
    sel = inst.get("subgraph", "full")
    if sel == "full":
        return graph.full_subgraph()
    if isinstance(sel, list):
        return induce_subgraph(graph, sel)
    raise SpecValidationError(f"bad subgraph selector {sel!r}")


def _build_potential(sub, pot):
    if pot is None or pot == "none":
        return None
    if pot == "boundary":
        return "boundary"
    if isinstance(pot, dict):
        if "values" in pot:
            _require_keys(pot, {"values"}, "potential")
            vals = np.asarray(pot["values"], dtype=np.float64)
            if vals.shape != (sub.n_vertices,):
                raise SpecValidationError(
                    f"potential length {vals.size} != |S| = {sub.n_vertices}")
            return vals
        if pot.get("formula") == "quadratic":
            _require_keys(pot, {"formula", "c", "center"}, "potential")
            return quadratic_potential(sub, float(pot["c"]), float(pot["center"]))
    raise SpecValidationError(f"bad potential spec {pot!r}")


def load_spec(path):
    with open(path) as fh:
        spec = json.load(fh)
    _require_keys(spec, {"schema", "instance", "potential", "analyses",
                         "tolerances"}, "spec")
    if spec.get("schema") != SCHEMA:
        raise SpecValidationError(f"schema must be {SCHEMA!r}")
    if "instance" not in spec:
        raise SpecValidationError("spec needs an instance")
    analyses = spec.get("analyses", ["bounds"])
    bad = [a for a in analyses if a not in ANALYSES]
    if bad:
        raise SpecValidationError(f"unknown analyses {bad}; known: {ANALYSES}")
    tol = DEFAULT_TOL.with_overrides(**spec.get("tolerances", {}))
    return spec, analyses, tol


# -- report helpers -----------------------------------------------------------

def _plain(obj):
    """Make report objects json-serializable (numpy -> python)."""
    if isinstance(obj, dict):
        return {k: _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    return obj


def write_json(path: Path, obj):
    path.write_text(json.dumps(_plain(obj), sort_keys=True, indent=2) + "\n")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def write_eta_csv(path: Path, times, eta_series):
    lines = ["s,t,eta"]
    for t, eta in zip(times, eta_series):
        for s in range(1, eta.values.size):
            lines.append(f"{s},{_fmt(t)},{_fmt(eta.values[s])}")
    path.write_text("\n".join(lines) + "\n")


def write_spectrum_csv(path: Path, spec):
    lines = ["index,eigenvalue"]
    for i, w in enumerate(spec.eigenvalues):
        lines.append(f"{i},{_fmt(w)}")
    path.write_text("\n".join(lines) + "\n")


# -- analyses -----------------------------------------------------------------

def run_instance(spec, analyses, tol, out_dir: Path):
    sub = _build_subgraph(spec["instance"])
    potential = _build_potential(sub, spec.get("potential", "none"))

    report = {"schema": SCHEMA, "instance": spec["instance"],
              "tolerances": tol.as_dict()}
    failures = []

    op = build_operator(sub, potential)
    spectrum = eigendecompose(op, tol)

    convexity = is_strongly_convex(sub)
    report["strongly_convex"] = convexity.convex
    if convexity.witness is not None:
        report["convexity_witness"] = list(convexity.witness)

    if "spectrum" in analyses:
        try:
            cert = rayleigh_gap_check(spectrum, op, tol)
            cert_info = {"recurrence_residual": cert.recurrence_residual,
                         "rayleigh_error": cert.rayleigh_error, "ok": True}
        except CertificateFailure as exc:
            cert_info = {"ok": False, "error": str(exc), "witness": exc.witness}
            failures.append(f"spectrum certificate: {exc}")
        report["spectrum"] = {
            "eigenvalues": spectrum.eigenvalues,
            "max_residual": float(spectrum.residuals.max()),
            "backend": spectrum.backend,
            "sweeps": spectrum.sweeps,
            "certificate": cert_info,
        }
        write_spectrum_csv(out_dir / "spectrum.csv", spectrum)

    if "bounds" in analyses:
        gap_report = verify_all(sub, potential, tol, spectrum=spectrum)
        report["bounds"] = gap_report.as_dict()
        for rec in gap_report.records:
            if rec.applicable and rec.bound is not None and not rec.holds:
                failures.append(
                    f"{rec.theorem}: bound {rec.bound!r} exceeds gap "
                    f"{gap_report.gap!r}")

    if "moduli" in analyses and spectrum.dim >= 2:
        ratio = RatioFunction.from_spectrum(spectrum, sub)
        eta = modulus_of_continuity(ratio.f, sub, tol)
        xi = extremal_pairs(eta)
        mod = {"eta": eta.values,
               "xi_pairs": int(xi.shape[0]),
               "tie_tol": eta.tie_tol}
        u0 = spectrum.vector(0)
        if u0[np.argmax(np.abs(u0))] < 0:
            u0 = -u0
        concave = log_concavity(np.log(u0), sub, tol)
        mod["log_concave"] = concave.holds
        if is_path_graph(sub) and concave.holds:
            omega = modulus_of_concavity(np.log(u0), sub)
            mod["omega"] = omega.values
            mod["omega_bar"] = omega.omega_bar
        report["moduli"] = mod

    if "heat" in analyses and spectrum.dim >= 2:
        times = default_times(max(spectrum.gap, 1e-12))
        traj = evolve(op, spectrum.vector(1), times, method="spectral",
                      spectrum=spectrum, tol=tol)
        heat_info = {}
        try:
            from .bounds import bound_thm1
            mu = bound_thm1(max(sub.diameter_S, 1))
            decay = decay_rate_check(traj, mu, tol)
            heat_info["decay"] = {"fitted_rate": decay.fitted_rate, "mu": mu,
                                  "decades": decay.decades, "ok": True}
        except (CertificateFailure, GapboundError) as exc:
            heat_info["decay"] = {"ok": False, "error": str(exc)}
            failures.append(f"heat decay: {exc}")
        if convexity.convex:
            try:
                ineq = mocheat_inequality_check(traj, sub, tol=tol)
                heat_info["mocheat"] = {"checked": ineq.checked,
                                        "worst_margin": ineq.worst_margin,
                                        "ok": True}
            except CertificateFailure as exc:
                heat_info["mocheat"] = {"ok": False, "error": str(exc)}
                failures.append(f"mocheat certificate: {exc}")
        if op.kind == "hamiltonian":
            try:
                rcert = ratio_evolution_check(op, spectrum, times[1:8], tol=tol)
                heat_info["ratio"] = {
                    "stationary_residual": rcert.stationary_residual,
                    "evolution_residual": rcert.evolution_residual, "ok": True}
            except CertificateFailure as exc:
                heat_info["ratio"] = {"ok": False, "error": str(exc)}
                failures.append(f"ratio certificate: {exc}")
        report["heat"] = heat_info
        write_eta_csv(out_dir / "eta_series.csv", traj.times, traj.eta_series)

    report["failures"] = failures
    report["ok"] = not failures
    return report


def _sweep_sizes(family, lo, hi):
    if family == "path":
        lo = max(lo, 2)
    elif family == "cycle":
        lo = max(lo, 3)
    elif family == "hypercube":
        lo = max(lo, 1)
    else:
        raise SpecValidationError(f"unknown sweep family {family!r}")
    return list(range(lo, hi + 1))


def _thread_count():
    env = os.environ.get("GAPBOUND_THREADS")
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def run_sweep(family, lo, hi, analyses, tol, out_dir: Path):
    sizes = _sweep_sizes(family, lo, hi)
    build = {"path": path_instance, "cycle": cycle_instance,
             "hypercube": hypercube_instance}[family]

    def one(n):
        sub = build(n)
        rep = verify_all(sub, None, tol)
        return n, rep

    rows = []
    with concurrent.futures.ThreadPoolExecutor(max_workers=_thread_count()) as ex:
        for n, rep in ex.map(one, sizes):
            rows.append((n, rep))
    rows.sort(key=lambda r: r[0])

    table = []
    reports = {}
    failures = []
    for n, rep in rows:
        row = {"size": n, "diameter": rep.diameter, "gap": rep.gap}
        for rec in rep.records:
            if rec.applicable and rec.bound is not None:
                row[f"{rec.theorem}_bound"] = rec.bound
                row[f"{rec.theorem}_slack"] = rec.slack
                if not rec.holds:
                    failures.append(f"{family}({n}) {rec.theorem}")
        table.append(row)
        reports[str(n)] = rep.as_dict()

    cols = sorted({k for row in table for k in row})
    lines = [",".join(cols)]
    for row in table:
        lines.append(",".join(
            _fmt(row[c]) if isinstance(row.get(c), float) else str(row.get(c, ""))
            for c in cols))
    (out_dir / "sweep.csv").write_text("\n".join(lines) + "\n")

    aggregate = {"schema": SCHEMA, "family": family, "sizes": sizes,
                 "table": table, "reports": reports,
                 "failures": failures, "ok": not failures,
                 "tolerances": tol.as_dict()}
    return aggregate


# -- entry points ---------------------------------------------------------------

def _tol_from_arg(arg):
    if not arg:
        return DEFAULT_TOL
    overrides = json.loads(arg)
    if not isinstance(overrides, dict):
        raise SpecValidationError("--tol must be a JSON object")
    return DEFAULT_TOL.with_overrides(**overrides)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gapbound",
        description="spectral-gap bound toolkit for homogeneous graphs")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one instance spec")
    ver_p = sub.add_parser("verify",
                           help="run + nonzero exit on any negative slack")
    for p in (run_p, ver_p):
        p.add_argument("--spec", required=True, help="instance spec JSON file")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--tol", default=None, help="tolerance overrides (JSON)")

    sweep_p = sub.add_parser("sweep", help="run a family of sizes")
    sweep_p.add_argument("--family", required=True,
                         choices=("path", "cycle", "hypercube"))
    sweep_p.add_argument("--min", type=int, required=True)
    sweep_p.add_argument("--max", type=int, required=True)
    sweep_p.add_argument("--analyses", default="bounds")
    sweep_p.add_argument("--out", required=True)
    sweep_p.add_argument("--tol", default=None)

    args = parser.parse_args(argv)

    try:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        if args.command in ("run", "verify"):
            spec, analyses, tol = load_spec(args.spec)
            if args.tol:
                tol = tol.with_overrides(**json.loads(args.tol))
            report = run_instance(spec, analyses, tol, out_dir)
            write_json(out_dir / "report.json", report)
            if not report["ok"]:
                return 1
            if args.command == "verify" and "bounds" in report:
                for rec in report["bounds"]["theorems"]:
                    if rec["applicable"] and rec["slack"] is not None \
                            and rec["slack"] < 0:
                        return 1
            return 0
        if args.command == "sweep":
            tol = _tol_from_arg(args.tol)
            analyses = [a.strip() for a in args.analyses.split(",") if a.strip()]
            bad = [a for a in analyses if a not in ANALYSES]
            if bad:
                raise SpecValidationError(f"unknown analyses {bad}")
            aggregate = run_sweep(args.family, args.min, args.max, analyses,
                                  tol, out_dir)
            write_json(out_dir / "sweep.json", aggregate)
            return 0 if aggregate["ok"] else 1
    except (SpecValidationError, ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except GapboundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
