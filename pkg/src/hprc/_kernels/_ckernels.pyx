# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops: blocking-flow max-flow and exhaustive subset cut values."""
import numpy as np
cimport numpy as cnp
from libc.stdint cimport int64_t, uint64_t
from libc.math cimport floor, log2, pow

cnp.import_array()


cdef extern from *:
    int __builtin_popcountll(unsigned long long) nogil
    int __builtin_ctzll(unsigned long long) nogil


cdef bint _bfs(Py_ssize_t n_nodes, Py_ssize_t s, Py_ssize_t t, int64_t[::1] start,
               int64_t[::1] adj, int64_t[::1] to, double[::1] res, double thr,
               int64_t[::1] level, int64_t[::1] queue) nogil:
    cdef Py_ssize_t i, qh = 0, qt = 0, u, k, a, v
    for i in range(n_nodes):
        level[i] = -1
    level[s] = 0
    queue[qt] = s
    qt += 1
    while qh < qt:
        u = queue[qh]
        qh += 1
        for k in range(start[u], start[u + 1]):
            a = adj[k]
            v = to[a]
            if level[v] < 0 and res[a] > thr:
                level[v] = level[u] + 1
                queue[qt] = v
                qt += 1
    return level[t] >= 0


cdef double _blocking(Py_ssize_t s, Py_ssize_t t, int64_t[::1] start, int64_t[::1] adj,
                      int64_t[::1] to, double[::1] res, double thr, int64_t[::1] level,
                      int64_t[::1] it, int64_t[::1] path) nogil:
    # iterative DFS; after each augmentation restart from s keeping arc pointers
    cdef double total = 0.0, b
    cdef Py_ssize_t depth = 0, u = s, k, a, v, i
    cdef bint advanced
    while True:
        if u == t:
            b = res[path[0]]
            for i in range(1, depth):
                if res[path[i]] < b:
                    b = res[path[i]]
            for i in range(depth):
                res[path[i]] -= b
                res[path[i] ^ 1] += b
            total += b
            depth = 0
            u = s
            continue
        advanced = False
        while it[u] < start[u + 1]:
            a = adj[it[u]]
            v = to[a]
            if res[a] > thr and level[v] == level[u] + 1:
                path[depth] = a
                depth += 1
                u = v
                advanced = True
                break
            it[u] += 1
        if advanced:
            continue
        if u == s:
            break
        level[u] = -1
        depth -= 1
        u = to[path[depth] ^ 1]
        it[u] += 1
    return total


def max_flow_arrays(Py_ssize_t n_nodes, tail, head, cap, Py_ssize_t source, Py_ssize_t sink,
                    double tol=1e-12, bint scaling=True):
    """Exact max-flow; returns (value, per-arc flow, source-side mask of the min cut)."""
    cdef int64_t[::1] tl = np.ascontiguousarray(tail, dtype=np.int64)
    cdef int64_t[::1] hd = np.ascontiguousarray(head, dtype=np.int64)
    cdef double[::1] cp = np.ascontiguousarray(cap, dtype=np.float64)
    cdef Py_ssize_t m = tl.shape[0], i, a, u
    cdef int64_t[::1] to = np.empty(2 * m, dtype=np.int64)
    cdef double[::1] res = np.zeros(2 * m, dtype=np.float64)
    cdef int64_t[::1] start = np.zeros(n_nodes + 1, dtype=np.int64)
    cdef int64_t[::1] fill = np.zeros(n_nodes + 1, dtype=np.int64)
    cdef int64_t[::1] adj = np.empty(2 * m, dtype=np.int64)
    cdef int64_t[::1] level = np.empty(n_nodes, dtype=np.int64)
    cdef int64_t[::1] queue = np.empty(n_nodes, dtype=np.int64)
    cdef int64_t[::1] it = np.empty(n_nodes + 1, dtype=np.int64)
    cdef int64_t[::1] path = np.empty(n_nodes + 1, dtype=np.int64)
    cdef double maxcap = 0.0, delta, value = 0.0
    for i in range(m):
        to[2 * i] = hd[i]
        to[2 * i + 1] = tl[i]
        res[2 * i] = cp[i]
        if cp[i] > maxcap:
            maxcap = cp[i]
        start[tl[i] + 1] += 1
        start[hd[i] + 1] += 1
    for i in range(n_nodes):
        start[i + 1] += start[i]
        fill[i] = start[i]
    for a in range(2 * m):
        u = to[a ^ 1]
        adj[fill[u]] = a
        fill[u] += 1
    with nogil:
        if scaling and maxcap > 0.0:
            delta = pow(2.0, floor(log2(maxcap)))
            while delta > maxcap * 1e-6 and delta > tol:
                while _bfs(n_nodes, source, sink, start, adj, to, res, delta - tol, level, queue):
                    for i in range(n_nodes + 1):
                        it[i] = start[i] if i < n_nodes else 0
                    value += _blocking(source, sink, start, adj, to, res, delta - tol, level, it, path)
                delta /= 2.0
        while _bfs(n_nodes, source, sink, start, adj, to, res, tol, level, queue):
            for i in range(n_nodes):
                it[i] = start[i]
            value += _blocking(source, sink, start, adj, to, res, tol, level, it, path)
        _bfs(n_nodes, source, sink, start, adj, to, res, tol, level, queue)
    flow = np.empty(m, dtype=np.float64)
    cdef double[::1] fv = flow
    for i in range(m):
        fv[i] = res[2 * i + 1]
    side = np.asarray(level) >= 0
    return value, flow, side


def subset_cut_values(int n, masks, tables):
    """Value of sum_e tables[e, |S & masks[e]|] for every subset S of range(n).

    Walks subsets in Gray-code order so each step touches only the edges of
    the flipped vertex.
    """
    cdef uint64_t[::1] mk = np.ascontiguousarray(masks, dtype=np.uint64)
    cdef double[:, ::1] tb = np.ascontiguousarray(tables, dtype=np.float64)
    cdef Py_ssize_t m = mk.shape[0], e, v, p
    cdef uint64_t k, g, N = (<uint64_t>1) << n
    cdef int64_t[::1] start = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] inc
    cdef int64_t[::1] fill = np.zeros(n + 1, dtype=np.int64)
    cdef int64_t[::1] cnt = np.zeros(max(m, 1), dtype=np.int64)
    cdef int64_t c
    cdef double total = 0.0
    out = np.zeros(N, dtype=np.float64)
    cdef double[::1] ov = out
    for e in range(m):
        for v in range(n):
            if (mk[e] >> v) & 1:
                start[v + 1] += 1
    for v in range(n):
        start[v + 1] += start[v]
        fill[v] = start[v]
    inc = np.zeros(max(start[n], 1), dtype=np.int64)
    for e in range(m):
        for v in range(n):
            if (mk[e] >> v) & 1:
                inc[fill[v]] = e
                fill[v] += 1
    with nogil:
        for e in range(m):
            total += tb[e, 0]
        ov[0] = total
        g = 0
        for k in range(1, N):
            v = __builtin_ctzll(k)
            g ^= (<uint64_t>1) << v
            if (g >> v) & 1:
                for p in range(start[v], start[v + 1]):
                    e = inc[p]
                    c = cnt[e]
                    total += tb[e, c + 1] - tb[e, c]
                    cnt[e] = c + 1
            else:
                for p in range(start[v], start[v + 1]):
                    e = inc[p]
                    c = cnt[e]
                    total += tb[e, c - 1] - tb[e, c]
                    cnt[e] = c - 1
            ov[g] = total
    return out
