#!/usr/bin/env python3
"""Compare the compiled and pure-numpy kernel backends.

The backend is chosen once at import time from the ``IMCFLOW_KERNELS``
environment variable, so each backend is timed in its own subprocess and
the parent prints the comparison.  Checksums of the kernel outputs are
compared across backends; a mismatch is an error, not a slowdown.

Usage: python benchmarks/bench_kernels.py [--repeats N] [--nbits B]
"""

import argparse
import os
import subprocess
import sys
import time

import numpy as np


def build_cut_graph(nv, rng):
    """A long weighted path with random shortcut arcs, shaped like the
    cut problems certification produces on fine radial complexes."""
    from imcflow.kernels import FlowGraph
    g = FlowGraph(nv)
    for i in range(nv - 1):
        w = float(rng.uniform(0.5, 4.0))
        g.add(i, i + 1, w, w)
    for _ in range(nv // 4):
        a = int(rng.integers(0, nv - 2))
        b = int(rng.integers(a + 1, nv))
        g.add(a, b, float(rng.uniform(0.1, 1.0)), 0.0)
    return g


def run_worker(repeats, nbits, graph_nv):
    from imcflow.kernels import (USING_NUMBA, max_flow, proper_superset_min,
                                 subset_values)

    print(f"backend_numba={USING_NUMBA}")
    rng = np.random.default_rng(7)

    g = build_cut_graph(graph_nv, rng)
    ea = rng.integers(0, nbits, 4 * nbits)
    eb = (ea + 1 + rng.integers(0, nbits - 1, ea.size)) % nbits
    ew = rng.uniform(0.1, 2.0, ea.size)
    unary = rng.uniform(-1.0, 1.0, nbits)

    # warm the JIT outside the timed region
    max_flow(g, 0, graph_nv - 1)
    vals = subset_values(nbits, 0.0, ea, eb, ew, unary)
    proper_superset_min(vals, nbits)

    def best_of(fn):
        best = float("inf")
        out = None
        for _ in range(repeats):
            t0 = time.perf_counter()
            out = fn()
            best = min(best, time.perf_counter() - t0)
        return best, out

    t_flow, (value, _) = best_of(lambda: max_flow(g, 0, graph_nv - 1))
    print(f"RESULT max_flow {t_flow:.6f} {value!r}")

    t_sub, vals = best_of(
        lambda: subset_values(nbits, 0.0, ea, eb, ew, unary))
    print(f"RESULT subset_values {t_sub:.6f} {float(vals.sum())!r}")

    t_sup, sup = best_of(lambda: proper_superset_min(vals, nbits))
    finite = sup[np.isfinite(sup)]
    print(f"RESULT proper_superset_min {t_sup:.6f} {float(finite.sum())!r}")


def run_backend(backend, args):
    env = dict(os.environ, IMCFLOW_KERNELS=backend)
    cmd = [sys.executable, os.path.abspath(__file__), "--worker",
           "--repeats", str(args.repeats), "--nbits", str(args.nbits),
           "--graph-nv", str(args.graph_nv)]
    proc = subprocess.run(cmd, env=env, capture_output=True, text=True)
    if proc.returncode != 0:
        sys.stderr.write(proc.stderr)
        raise SystemExit(f"{backend} worker failed")
    times, sums = {}, {}
    for line in proc.stdout.splitlines():
        if line.startswith("RESULT "):
            _, name, secs, check = line.split()
            times[name] = float(secs)
            sums[name] = check
        elif line.startswith("backend_numba="):
            flag = line.partition("=")[2] == "True"
            if backend == "numba" and not flag:
                print("note: numba unavailable; 'numba' run fell back to numpy")
    return times, sums


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5,
                    help="timing repeats per kernel (best is reported)")
    ap.add_argument("--nbits", type=int, default=20,
                    help="subset enumeration size (2**nbits values)")
    ap.add_argument("--graph-nv", type=int, default=20000,
                    help="vertices in the max-flow benchmark graph")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()

    if args.worker:
        run_worker(args.repeats, args.nbits, args.graph_nv)
        return

    print(f"kernel benchmark: nbits={args.nbits} graph_nv={args.graph_nv} "
          f"repeats={args.repeats}")
    results = {}
    for backend in ("numpy", "numba"):
        print(f"running {backend} worker...")
        results[backend] = run_backend(backend, args)

    t_np, s_np = results["numpy"]
    t_nb, s_nb = results["numba"]
    print()
    print(f"{'kernel':24} {'numpy':>10} {'numba':>10} {'speedup':>9}")
    for name in t_np:
        if s_np[name] != s_nb[name]:
            raise SystemExit(f"backend outputs disagree on {name}: "
                             f"{s_np[name]} vs {s_nb[name]}")
        ratio = t_np[name] / t_nb[name] if t_nb[name] > 0 else float("inf")
        print(f"{name:24} {t_np[name] * 1e3:9.2f}ms {t_nb[name] * 1e3:9.2f}ms "
              f"{ratio:8.1f}x")
    print("\noutputs identical across backends")


if __name__ == "__main__":
    main()
