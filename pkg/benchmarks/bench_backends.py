"""Compare the numba and numpy kernel backends.

Each backend runs in a fresh interpreter (the backend is fixed at import
time by ``QRANK_BACKEND``).  Kernels are called once before timing so numba
compilation is excluded.

    python benchmarks/bench_backends.py [--repeat 3] [--quick]
"""

from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import time


def workloads(quick: bool):
    import numpy as np

    from qrank import kernels
    from qrank.gabidulin import make_gabidulin, min_rank_distance_bruteforce
    from qrank.gf2field import BasisF2n, find_irreducible
    from qrank.qconstruct import build_css_code, build_proposed_code, certify_distance
    from qrank.stacked_sim import simulate_trials

    rng = np.random.default_rng(0)
    rows = rng.integers(0, 1 << 16, size=(200_000 if quick else 1_000_000, 8), dtype=np.uint64)
    proposed, _ = build_proposed_code(2, 1)
    css, _ = build_css_code(3, 1, 1)
    f = find_irreducible(16 if quick else 20)
    gab = make_gabidulin(f, BasisF2n.polynomial(f), 1)
    trials = 1000 if quick else 5000

    return {
        "batch_rank": lambda: kernels.batch_rank(rows, 16),
        "certify [[8,4,2]]": lambda: certify_distance(proposed, threads=1),
        "certify [[9,3,2]]": lambda: certify_distance(css, threads=1),
        f"MRD scan 2^{f.degree}": lambda: min_rank_distance_bruteforce(gab, budget=2**20, threads=1),
        f"simulate {trials} trials 8x8": lambda: simulate_trials(8, 8, 20, (1, 5), trials, seed=1, threads=1),
    }


def worker(repeat: int, quick: bool) -> None:
    from qrank import kernels

    out = {"backend": kernels.BACKEND, "times": {}}
    for name, fn in workloads(quick).items():
        fn()  # warm-up / compile
        best = float("inf")
        for _ in range(repeat):
            t0 = time.perf_counter()
            fn()
            best = min(best, time.perf_counter() - t0)
        out["times"][name] = best
    print(json.dumps(out))


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--repeat", type=int, default=3)
    ap.add_argument("--quick", action="store_true")
    ap.add_argument("--worker", action="store_true", help=argparse.SUPPRESS)
    args = ap.parse_args()
    if args.worker:
        worker(args.repeat, args.quick)
        return

    results = {}
    for backend in ("numba", "numpy"):
        cmd = [sys.executable, __file__, "--worker", "--repeat", str(args.repeat)] + (["--quick"] if args.quick else [])
        env = dict(os.environ, QRANK_BACKEND=backend, QRANK_THREADS="1")
        res = subprocess.run(cmd, env=env, capture_output=True, text=True, check=True)
        results[backend] = json.loads(res.stdout.strip().splitlines()[-1])["times"]

    names = list(results["numba"])
    width = max(len(n) for n in names)
    print(f"{'workload'.ljust(width)}  {'numba [s]':>10}  {'numpy [s]':>10}  {'speedup':>8}")
    for name in names:
        a, b = results["numba"][name], results["numpy"][name]
        print(f"{name.ljust(width)}  {a:10.4f}  {b:10.4f}  {b / a:7.1f}x")


if __name__ == "__main__":
    main()
