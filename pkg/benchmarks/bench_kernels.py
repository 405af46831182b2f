#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the three numeric hot loops on a seeded rounding instance and one
end-to-end derandomized MIS run per backend.  Usage:

    python benchmarks/bench_kernels.py [--n 600] [--repeat 5]
"""

import argparse
import random
import time


def build_instance(rng, n, L=2, k=14, dcap=20):
    eu, ev, mgr = [], [], []
    deg = [0] * n
    pairs = set()
    for _ in range(8 * n):
        a, b = rng.sample(range(n), 2)
        key = (min(a, b), max(a, b))
        if key in pairs or deg[a] >= dcap or deg[b] >= dcap:
            continue
        pairs.add(key)
        deg[a] += 1
        deg[b] += 1
        eu.append(key[0])
        ev.append(key[1])
        mgr.append(rng.choice([-1, rng.randrange(n)]))
    m = len(eu)
    ut = [tuple(rng.randint(0, 1000) for _ in range(L * L)) for _ in range(m)]
    ct = [tuple(rng.randint(0, 1000) for _ in range(L * L)) for _ in range(m)]
    tot = 1 << k
    lam = []
    for _ in range(n):
        a = rng.randint(0, tot)
        lam.append([a, tot - a])
    colors = [rng.randrange(64) for _ in range(n)]
    return n, L, eu, ev, mgr, ut, ct, lam, k, colors


def bench_kernels(impl, args_tuple, repeat):
    n, L, eu, ev, mgr, ut, ct, lam, k, colors = args_tuple
    out = {}
    t0 = time.perf_counter()
    for _ in range(repeat):
        impl.eval_potential(n, L, eu, ev, ut, ct, None, None, lam, k)
    out["eval_potential"] = (time.perf_counter() - t0) / repeat
    t0 = time.perf_counter()
    for _ in range(repeat):
        impl.edge_weights_for_step(n, L, eu, ev, ut, ct, None, None, lam, k,
                                   3, 2)
    out["edge_weights"] = (time.perf_counter() - t0) / repeat
    t0 = time.perf_counter()
    for _ in range(repeat):
        work = [list(r) for r in lam]
        impl.rounding_color_loop(n, L, eu, ev, mgr, ut, ct, None, None, work,
                                 k, colors, 1, 384, 3, 2, 2)
    out["color_loop"] = (time.perf_counter() - t0) / repeat
    return out


def bench_mis(n, seed):
    from locround import graph as G, mis as M

    rng = random.Random(seed)
    nodes = list(range(1, n + 1))
    deg = {v: 0 for v in nodes}
    pairs = set()
    for _ in range(6 * n):
        u, v = rng.sample(nodes, 2)
        key = (min(u, v), max(u, v))
        if key in pairs or deg[u] >= 16 or deg[v] >= 16:
            continue
        pairs.add(key)
        deg[u] += 1
        deg[v] += 1
    g = G.simple_graph(nodes, sorted(pairs))
    t0 = time.perf_counter()
    M.mis(g)
    return time.perf_counter() - t0, g.n_edges()


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=600)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    from locround._kernel import BACKEND, pure

    rng = random.Random(7)
    inst = build_instance(rng, args.n)
    rows = [("pure", bench_kernels(pure, inst, args.repeat))]
    if BACKEND == "compiled":
        from locround._kernel import _core

        rows.append(("compiled", bench_kernels(_core, inst, args.repeat)))
    print(f"kernel microbenchmarks (n={args.n}, m~{len(inst[2])}):")
    names = ["eval_potential", "edge_weights", "color_loop"]
    print(f"{'backend':<10}" + "".join(f"{k:>16}" for k in names))
    for (label, res) in rows:
        print(f"{label:<10}" + "".join(f"{res[k] * 1e3:>13.2f} ms"
                                       for k in names))
    if len(rows) == 2:
        print("speedup:  " + "".join(
            f"{rows[0][1][k] / rows[1][1][k]:>14.1f}x " for k in names))

    print(f"\nend-to-end MIS (selected backend = {BACKEND}):")
    took, m = bench_mis(args.n, 3)
    print(f"  n={args.n} m={m}: {took:.2f}s")
    print("  (set LOCROUND_FORCE_PURE=1 and rerun to compare the fallback)")


if __name__ == "__main__":
    main()
