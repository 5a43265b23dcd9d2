"""Compare the compiled and interpreted motif kernels.

    python3 benchmarks/bench_count.py [--sizes 1000 3000 10000] [--python-max 3000]

Each kernel is timed on temporal networks generated from a sparse random
substrate.  The interpreted path is the same kernel source run as plain
Python, which is what ``MOTIFEVAL_DISABLE_NUMBA=1`` selects.
"""

import argparse
import time

import numpy as np

from motifeval import motif
from motifeval._jit import HAVE_NUMBA, python_version
from motifeval.diffusion import ModelSpec, run_cascade
from motifeval.graph_io import generate_synthetic
from motifeval.rng import RngHierarchy
from motifeval.temporal import TemporalNetwork, combine_cascades


def network(kind, n_edges, seed=0):
    rh = RngHierarchy(seed)
    g = generate_synthetic("erdos_renyi", 5000, 0.001, rh.stream("graph"))
    m = ModelSpec(kind, phi_scale=0.3)
    cascades, total = [], 0
    while total < n_edges:
        c = run_cascade(g, m, rh.stream("cascade", kind, len(cascades)))
        cascades.append(c)
        total += len(c)
    tn = combine_cascades(cascades, rh.stream("combine", kind), 3.0, g.node_count)
    return TemporalNetwork(tn.src[:n_edges], tn.dst[:n_edges], tn.t[:n_edges], g.node_count)


def timed(fn, *args, repeat=3):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def fmt(seconds):
    return "-" if seconds is None else f"{seconds:.4f}"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--sizes", type=int, nargs="+", default=[1000, 3000, 10000, 100000])
    ap.add_argument("--python-max", type=int, default=3000, help="largest size run through the interpreted path")
    ap.add_argument("--delta", type=float, default=10 / 3)
    ap.add_argument("--models", nargs="+", default=["SM", "BK"])
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba unavailable or disabled; both columns run interpreted code")

    lut = motif._build_triad_lut()
    fast_c, brute_c = motif._count_fast, motif._count_bruteforce
    fast_py, brute_py = python_version(fast_c), python_version(brute_c)
    tiny = network("SM", 50)
    fast_c(tiny.src, tiny.dst, tiny.t, 1.0, tiny.node_count, lut)  # compile
    brute_c(tiny.src, tiny.dst, tiny.t, 1.0)

    heads = ["fast/numba", "fast/python", "brute/numba", "brute/python", "fast speedup"]
    print(f"{'model':<6}{'edges':>8}" + "".join(f"{h:>14}" for h in heads))
    for kind in args.models:
        for n in args.sizes:
            tn = network(kind, n)
            a = (tn.src, tn.dst, tn.t)
            t_fc, counts = timed(fast_c, *a, args.delta, tn.node_count, lut)
            t_bc, brute = timed(brute_c, *a, args.delta)
            assert np.array_equal(counts, brute)
            t_fp = t_bp = None
            if n <= args.python_max:
                t_fp, _ = timed(fast_py, *a, args.delta, tn.node_count, lut, repeat=1)
                t_bp, _ = timed(brute_py, *a, args.delta, repeat=1)
            cells = [fmt(t_fc), fmt(t_fp), fmt(t_bc), fmt(t_bp), "-" if t_fp is None else f"{t_fp / t_fc:.0f}x"]
            print(f"{kind:<6}{n:>8}" + "".join(f"{c:>14}" for c in cells))


if __name__ == "__main__":
    main()
