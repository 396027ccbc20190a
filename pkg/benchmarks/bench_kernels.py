"""Time the compiled and pure-Python kernel backends on the same inputs.

    python benchmarks/bench_kernels.py [--repeat 3]
"""
import argparse
import time

import numpy as np

from cubecover import kernels
from cubecover.generators import grid, tree, tree_product


def csr(g):
    adj = [[] for _ in range(g.n)]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    indptr = np.cumsum([0] + [len(a) for a in adj]).astype(np.int32)
    indices = np.array([w for a in adj for w in sorted(a)], dtype=np.int32)
    return indptr, indices


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    cases = [("tree-60", tree(60, 0)), ("grid-8x8", grid(8, 8)),
             ("tree_product-10x10", tree_product((10, 10), 0)), ("grid-12x12", grid(12, 12))]
    names = sorted(kernels.BACKENDS)
    print(f"backends available: {names} (selected: {kernels.BACKEND})")
    print(f"{'instance':<20}{'kernel':<18}" + "".join(f"{n:>12}" for n in names) + f"{'speedup':>10}")
    for label, g in cases:
        indptr, indices = csr(g)
        d = np.ascontiguousarray(g.dist, dtype=np.int32)
        jobs = {
            "all_pairs_bfs": lambda m: m.all_pairs_bfs(g.n, indptr, indices),
            "median_violation": lambda m: m.median_violation(d),
            "median_table": lambda m: m.median_table(d),
        }
        for kname, job in jobs.items():
            timings, results = {}, []
            for n in names:
                timings[n], out = best_of(lambda: job(kernels.BACKENDS[n]), args.repeat)
                results.append(np.asarray(out) if out is not None else None)
            if all(r is None for r in results):
                same = True
            else:
                same = all(np.array_equal(results[0], r) for r in results[1:])
            assert same, f"backends disagree on {kname} for {label}"
            speed = ""
            if "cython" in timings and "python" in timings:
                speed = f"{timings['python'] / max(timings['cython'], 1e-9):9.1f}x"
            print(f"{label:<20}{kname:<18}" + "".join(f"{timings[n]:12.4f}" for n in names) + f"{speed:>10}")


if __name__ == "__main__":
    main()
