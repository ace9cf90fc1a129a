"""Instance generators and brute-force oracles shared by the tests."""
from __future__ import annotations

import itertools

import numpy as np

from hprc.hypergraph import CutFunctionSpec, Hypergraph

SPECS = {
    "standard": CutFunctionSpec.standard(),
    "star": CutFunctionSpec.star(),
    "card": CutFunctionSpec.cardinality(p=0.5),
}


def random_spec(rng, kinds, r):
    kind = kinds[int(rng.integers(len(kinds)))]
    if kind == "table":
        # random concave non-decreasing table with g(0) = 0
        inc = np.sort(rng.random(r) + 0.05)[::-1]
        return CutFunctionSpec.cardinality(table=np.concatenate([[0.0], np.cumsum(inc)]))
    return SPECS[kind]


def random_hypergraph(rng, n, kinds=("standard",), rmax=5, extra=None, mu_max=1, wmax=3, connected=True):
    """Random hypergraph; with connected=True a random spanning path is added first."""
    edges = []
    if connected:
        perm = rng.permutation(n)
        for a, b in zip(perm, perm[1:]):
            edges.append(((int(a), int(b)), int(rng.integers(1, wmax + 1)), random_spec(rng, kinds, 2)))
    m = int(rng.integers(1, n + 2)) if extra is None else extra
    for _ in range(m):
        r = int(rng.integers(2, min(n, rmax) + 1))
        vs = rng.choice(n, r, replace=False)
        edges.append((vs, int(rng.integers(1, wmax + 1)), random_spec(rng, kinds, r)))
    mu = rng.integers(1, mu_max + 1, n) if mu_max > 1 else None
    return Hypergraph(n, edges, mu)


def cycle(n):
    return Hypergraph(n, [((i, (i + 1) % n), 1) for i in range(n)])


def path(n):
    return Hypergraph(n, [((i, i + 1), 1) for i in range(n - 1)])


def hypercube(dim):
    n = 1 << dim
    return Hypergraph(n, [((a, a ^ (1 << b)), 1) for a in range(n) for b in range(dim) if a < a ^ (1 << b)])


def subsets(n):
    for bits in range(1, (1 << n) - 1):
        yield [i for i in range(n) if bits >> i & 1]


def brute_min_ratio(G):
    """(Psi*, argmin) by direct loops."""
    best = (np.inf, None)
    for S in subsets(G.n):
        mask = np.zeros(G.n, dtype=bool)
        mask[S] = True
        val = G.cut_value(mask) / min(G.mu[mask].sum(), G.mu[~mask].sum())
        if val < best[0]:
            best = (val, S)
    return best


def brute_seeded_ratio(G, s):
    best = np.inf
    for S in subsets(G.n):
        mask = np.zeros(G.n, dtype=bool)
        mask[S] = True
        corr = abs(float(np.dot(G.mu * s, mask)))
        if corr > 1e-12:
            best = min(best, G.cut_value(mask) / corr)
    return best


def threshold_integral(fn, x):
    """int fn({i : x_i >= t}) dt over the range of x, evaluated exactly on the breakpoints."""
    x = np.asarray(x, dtype=float)
    vals = np.unique(x)
    total = 0.0
    for lo, hi in zip(vals, vals[1:]):
        level = frozenset(int(i) for i in np.flatnonzero(x >= hi))
        total += (hi - lo) * fn(level)
    return total


def lovasz_oracle(spec, h, x):
    hv = tuple(h)
    return threshold_integral(lambda loc: spec.delta(hv, [hv[i] for i in loc]), x)


def f_norm_oracle(spec, h, x):
    hv = tuple(h)
    a = np.concatenate([[0.0], np.abs(np.asarray(x, dtype=float))])
    # index 0 is a dummy zero coordinate so the integral starts at 0
    return threshold_integral(lambda loc: spec.F(hv, [hv[i - 1] for i in loc if i > 0]), a)


def dual_norm_oracle(spec, h, y):
    a = np.abs(np.asarray(y, dtype=float))
    best = 0.0
    for size in range(1, len(h) + 1):
        for members in itertools.combinations(range(len(h)), size):
            best = max(best, a[list(members)].sum() / spec.F(h, [h[i] for i in members]))
    return best


def base_polytope_lp_max(spec, h, x):
    """max <y, x> over B(delta_h) by linear programming on all subset constraints."""
    from scipy.optimize import linprog

    r = len(h)
    A, b = [], []
    for size in range(1, r):
        for members in itertools.combinations(range(r), size):
            row = np.zeros(r)
            row[list(members)] = 1.0
            A.append(row)
            b.append(spec.delta(h, [h[i] for i in members]))
    res = linprog(-np.asarray(x, dtype=float), A_ub=np.array(A), b_ub=np.array(b), A_eq=np.ones((1, r)),
                  b_eq=[0.0], bounds=[(None, None)] * r, method="highs")
    assert res.status == 0
    return -res.fun


def brute_min_cut(n_nodes, tail, head, cap, s, t):
    best = np.inf
    others = [v for v in range(n_nodes) if v not in (s, t)]
    for bits in range(1 << len(others)):
        side = {s} | {others[i] for i in range(len(others)) if bits >> i & 1}
        val = sum(c for a, b, c in zip(tail, head, cap) if a in side and b not in side)
        best = min(best, val)
    return best


def random_flow(rng, G, n_paths=None, amount=3.0):
    """Sum of random paths on the factor graph between random vertex pairs."""
    from hprc.flow import HypergraphFlow

    y = [np.zeros(e.rank) for e in G.edges]
    n_paths = int(rng.integers(1, 2 * G.n + 1)) if n_paths is None else n_paths
    pos = [{v: p for p, v in enumerate(e.vertices)} for e in G.edges]
    for _ in range(n_paths):
        u = int(rng.integers(G.n))
        amt = float(rng.random() * amount)
        for _ in range(int(rng.integers(1, 4))):
            ks = G.incidence[u]
            if not ks:
                break
            k = ks[int(rng.integers(len(ks)))]
            v = int(rng.choice([x for x in G.edges[k].vertices if x != u]))
            y[k][pos[k][u]] += amt
            y[k][pos[k][v]] -= amt
            u = v
    return HypergraphFlow(y)
