#!/usr/bin/env python3
"""Benchmark the compiled Jacobi kernel against the pure-numpy fallback.

Runs both backends on random symmetric matrices and hypercube Laplacians,
reporting wall time and the worst eigenvalue discrepancy between them.
The fallback is quadratic-per-rotation in numpy call overhead, so it is
capped at moderate sizes unless --full is given.

Usage: python benchmarks/bench_jacobi.py [--sizes 64,128,256] [--full]
"""

import argparse
import time

import numpy as np

from gapbound.jacobi import available_backends, jacobi_eigh


def hypercube_laplacian(n_bits):
    n = 1 << n_bits
    a = np.zeros((n, n))
    for i in range(n):
        a[i, i] = n_bits
        for b in range(n_bits):
            a[i, i ^ (1 << b)] = -1.0
    return a


def run(matrix, backend):
    t0 = time.perf_counter()
    w, v, info = jacobi_eigh(matrix, backend=backend)
    dt = time.perf_counter() - t0
    resid = float(np.abs(matrix @ v - v * w).max())
    return w, dt, info.sweeps, resid


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="32,64,128,256")
    parser.add_argument("--full", action="store_true",
                        help="run the python fallback at every size")
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]
    backends = available_backends()
    print(f"backends: {backends}")

    rng = np.random.default_rng(7)
    py_cap = max(sizes) if args.full else 256

    header = f"{'case':>16} {'n':>6}"
    for b in backends:
        header += f" {b + ' [s]':>12} {'sweeps':>7}"
    header += f" {'max|dw|':>10}"
    print(header)

    cases = [("random", lambda n: (lambda m: m + m.T)(rng.normal(size=(n, n))))]
    cases.append(("hypercube", lambda n: hypercube_laplacian(int(np.log2(n)))))

    for name, make in cases:
        for n in sizes:
            if name == "hypercube" and (n & (n - 1)) != 0:
                continue
            m = make(n)
            row = f"{name:>16} {n:>6}"
            results = {}
            for b in backends:
                if b == "python" and n > py_cap:
                    row += f" {'skipped':>12} {'-':>7}"
                    continue
                w, dt, sweeps, resid = run(m, b)
                results[b] = w
                row += f" {dt:>12.3f} {sweeps:>7}"
            if len(results) == 2:
                dw = float(np.abs(results["cython"] - results["python"]).max())
                row += f" {dw:>10.2e}"
            print(row)


if __name__ == "__main__":
    main()
