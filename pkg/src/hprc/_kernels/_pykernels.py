"""Pure-Python/numpy versions of the compiled kernels (same signatures)."""
from __future__ import annotations

import math
from collections import deque

import numpy as np


def _build_residual(n_nodes, tail, head, cap):
    m = len(tail)
    to = [0] * (2 * m)
    res = [0.0] * (2 * m)
    adj = [[] for _ in range(n_nodes)]
    for i in range(m):
        u, v = int(tail[i]), int(head[i])
        to[2 * i], to[2 * i + 1] = v, u
        res[2 * i] = float(cap[i])
        adj[u].append(2 * i)
        adj[v].append(2 * i + 1)
    return to, res, adj


def _bfs(n_nodes, s, t, adj, to, res, thr):
    level = [-1] * n_nodes
    level[s] = 0
    q = deque([s])
    while q:
        u = q.popleft()
        for a in adj[u]:
            v = to[a]
            if level[v] < 0 and res[a] > thr:
                level[v] = level[u] + 1
                q.append(v)
    return level


def _blocking(s, t, adj, to, res, thr, level):
    total = 0.0
    it = [0] * len(adj)
    path = []
    u = s
    while True:
        if u == t:
            b = min(res[a] for a in path)
            for a in path:
                res[a] -= b
                res[a ^ 1] += b
            total += b
            path = []
            u = s
            continue
        au = adj[u]
        advanced = False
        while it[u] < len(au):
            a = au[it[u]]
            v = to[a]
            if res[a] > thr and level[v] == level[u] + 1:
                path.append(a)
                u = v
                advanced = True
                break
            it[u] += 1
        if advanced:
            continue
        if u == s:
            return total
        level[u] = -1
        a = path.pop()
        u = to[a ^ 1]
        it[u] += 1


def max_flow_arrays(n_nodes, tail, head, cap, source, sink, tol=1e-12, scaling=True):
    """Exact max-flow; returns (value, per-arc flow, source-side mask of the min cut)."""
    to, res, adj = _build_residual(n_nodes, tail, head, cap)
    m = len(tail)
    maxcap = max((float(c) for c in cap), default=0.0)
    value = 0.0
    if scaling and maxcap > 0.0:
        delta = 2.0 ** math.floor(math.log2(maxcap))
        while delta > maxcap * 1e-6 and delta > tol:
            while True:
                level = _bfs(n_nodes, source, sink, adj, to, res, delta - tol)
                if level[sink] < 0:
                    break
                value += _blocking(source, sink, adj, to, res, delta - tol, level)
            delta /= 2.0
    while True:
        level = _bfs(n_nodes, source, sink, adj, to, res, tol)
        if level[sink] < 0:
            break
        value += _blocking(source, sink, adj, to, res, tol, level)
    side = np.array(_bfs(n_nodes, source, sink, adj, to, res, tol)) >= 0
    flow = np.array([res[2 * i + 1] for i in range(m)], dtype=np.float64)
    return value, flow, side


def subset_cut_values(n, masks, tables):
    """Value of sum_e tables[e, |S & masks[e]|] for every subset S of range(n)."""
    subsets = np.arange(1 << n, dtype=np.uint64)
    out = np.zeros(1 << n, dtype=np.float64)
    tables = np.asarray(tables, dtype=np.float64)
    for e, mask in enumerate(np.asarray(masks, dtype=np.uint64)):
        k = np.bitwise_count(subsets & mask)
        out += tables[e][k]
    return out
