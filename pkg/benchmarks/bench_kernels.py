"""Compare the compiled and pure-Python kernel backends.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from hprc._kernels import available_backends, get_backend
from hprc.flow import FlowTopology
from hprc.hypergraph import Hypergraph
from hprc.improve import seed_from_cut


def random_hypergraph(rng, n, m, rmax=5):
    edges = []
    for _ in range(m):
        r = int(rng.integers(2, rmax + 1))
        edges.append((rng.choice(n, r, replace=False), int(rng.integers(1, 5))))
    return Hypergraph(n, edges)


def best_time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    rng = np.random.default_rng(0)
    backends = available_backends()
    print(f"backends: {', '.join(backends)}")
    print(f"{'kernel':<28}{'size':>14}" + "".join(f"{b:>12}" for b in backends) + f"{'speedup':>10}")
    for n, m in [(16, 32), (64, 128), (256, 512)]:
        G = random_hypergraph(rng, n, m)
        s = seed_from_cut(G, list(range(n // 3)))
        net = FlowTopology(G, s).network(0.5)
        times = []
        for b in backends:
            impl = get_backend(b)
            times.append(best_time(lambda: impl.max_flow_arrays(net.n_nodes, net.tail, net.head, net.cap,
                                                                net.source, net.sink), args.repeat))
        speed = times[0] / times[-1] if len(times) > 1 else 1.0
        print(f"{'max_flow (factor graph)':<28}{f'n={n},m={m}':>14}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
              + f"{speed:>9.1f}x")
    for n in (12, 16, 18):
        G = random_hypergraph(rng, n, 2 * n)
        masks = np.array([sum(1 << v for v in e.vertices) for e in G.edges], dtype=np.uint64)
        width = G.rank + 1
        tables = np.zeros((G.m, width))
        for k, tab in enumerate(G.edge_tables):
            tables[k, : len(tab)] = tab
        times = []
        for b in backends:
            impl = get_backend(b)
            times.append(best_time(lambda: impl.subset_cut_values(n, masks, tables), args.repeat))
        speed = times[0] / times[-1] if len(times) > 1 else 1.0
        print(f"{'subset_cut_values':<28}{f'n={n},m={2 * n}':>14}" + "".join(f"{t * 1e3:>10.2f}ms" for t in times)
              + f"{speed:>9.1f}x")


if __name__ == "__main__":
    main()
