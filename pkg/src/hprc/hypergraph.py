"""Submodular hypergraphs, their cut functions and Lovasz extensions.

A hyperedge h carries a monotone submodular function F_h with F_h(0) = 0 and
positive singletons.  Its cut function is delta_h(S) = min{F_h(S), F_h(h \\ S)}.
Built-in kinds depend only on |S| and are tabulated once per rank; the
``oracle`` kind calls a user function on frozensets of vertex ids.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np

from .errors import DegenerateCutError, DomainError, UnsupportedRankError

MAX_EXHAUSTIVE_RANK = 20
CARDINALITY_KINDS = ("standard", "star", "cardinality")
KINDS = CARDINALITY_KINDS + ("clique", "oracle")


@dataclass(frozen=True)
class CutFunctionSpec:
    """Description of F_h.  ``cardinality`` takes either p (F = |S|^p) or a table g(0..r)."""

    kind: str = "standard"
    p: float | None = None
    table: tuple[float, ...] | None = None
    oracle: Callable[[frozenset], float] | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise DomainError(f"unknown cut-function kind {self.kind!r}")
        if self.kind == "cardinality":
            if (self.p is None) == (self.table is None):
                raise DomainError("cardinality kind needs exactly one of p or table")
            if self.p is not None and not (0.0 < self.p <= 1.0):
                raise DomainError("cardinality exponent must lie in (0, 1]")
            if self.table is not None:
                g = np.asarray(self.table, dtype=float)
                if len(g) < 2 or g[0] != 0.0 or g[1] <= 0.0:
                    raise DomainError("table must start 0, g(1) > 0")
                d = np.diff(g)
                if np.any(d < -1e-12) or np.any(np.diff(d) > 1e-12):
                    raise DomainError("table must be non-decreasing and concave")
        if self.kind == "oracle" and self.oracle is None:
            raise DomainError("oracle kind needs a callable")

    @classmethod
    def standard(cls) -> "CutFunctionSpec":
        return cls("standard")

    @classmethod
    def star(cls) -> "CutFunctionSpec":
        return cls("star")

    @classmethod
    def clique(cls) -> "CutFunctionSpec":
        return cls("clique")

    @classmethod
    def cardinality(cls, p: float | None = None, table: Sequence[float] | None = None) -> "CutFunctionSpec":
        return cls("cardinality", p=p, table=None if table is None else tuple(float(v) for v in table))

    @classmethod
    def from_oracle(cls, fn: Callable[[frozenset], float]) -> "CutFunctionSpec":
        return cls("oracle", oracle=fn)

    @property
    def cardinality_based(self) -> bool:
        return self.kind in CARDINALITY_KINDS

    def label(self) -> str:
        if self.kind == "cardinality":
            if self.p is not None:
                return f"card:p={self.p!r}"
            return "card:g=" + ",".join(repr(v) for v in self.table)
        return self.kind

    def size_table(self, r: int) -> np.ndarray:
        """F(k) for k = 0..r (cardinality-based kinds only)."""
        k = np.arange(r + 1, dtype=float)
        if self.kind == "standard":
            return np.minimum(k, 1.0)
        if self.kind == "star":
            return k
        if self.kind == "cardinality":
            if self.p is not None:
                return k ** self.p
            if len(self.table) != r + 1:
                raise DomainError(f"table has {len(self.table)} entries, rank {r} needs {r + 1}")
            return np.asarray(self.table, dtype=float)
        raise DomainError(f"{self.kind} kind has no size table")

    def delta_table(self, r: int) -> np.ndarray:
        """delta(S) as a function of |S| for k = 0..r."""
        if self.kind == "clique":
            k = np.arange(r + 1, dtype=float)
            return k * (r - k)
        g = self.size_table(r)
        return np.minimum(g, g[::-1])

    def F(self, h: Sequence[int], S: Iterable[int]) -> float:
        S = frozenset(S)
        if self.kind == "oracle":
            return float(self.oracle(S))
        return float(self.size_table(len(h))[len(S)])

    def delta(self, h: Sequence[int], S: Iterable[int]) -> float:
        S = frozenset(S)
        if self.kind == "oracle":
            return min(self.F(h, S), self.F(h, frozenset(h) - S))
        return float(self.delta_table(len(h))[len(S)])


STANDARD = CutFunctionSpec.standard()


@dataclass(frozen=True)
class Hyperedge:
    vertices: tuple[int, ...]
    weight: float = 1.0
    spec: CutFunctionSpec = STANDARD

    @property
    def rank(self) -> int:
        return len(self.vertices)


def _coerce_edge(e) -> Hyperedge:
    if isinstance(e, Hyperedge):
        return e
    if len(e) == 2:
        return Hyperedge(tuple(e[0]), float(e[1]))
    return Hyperedge(tuple(e[0]), float(e[1]), e[2])


class Hypergraph:
    """Weighted submodular hypergraph on vertices 0..n-1 with vertex measure mu.

    Clique-kind edges are expanded into rank-2 standard edges on construction.
    Vertices inside each hyperedge are stored in ascending order; per-edge
    vectors (flows, restrictions) follow that order.
    """

    def __init__(self, n: int, edges: Iterable, mu: Sequence[float] | None = None):
        if n < 1:
            raise DomainError("need at least one vertex")
        self.n = int(n)
        out = []
        for raw in edges:
            e = _coerce_edge(raw)
            verts = tuple(sorted(int(v) for v in e.vertices))
            if len(verts) < 2:
                raise DomainError("hyperedges need at least two vertices")
            if len(set(verts)) != len(verts):
                raise DomainError(f"repeated vertex in hyperedge {verts}")
            if verts[0] < 0 or verts[-1] >= n:
                raise DomainError(f"vertex out of range in hyperedge {verts}")
            if not (e.weight > 0 and math.isfinite(e.weight)):
                raise DomainError("hyperedge weights must be positive")
            if e.spec.kind == "clique":
                for a, b in itertools.combinations(verts, 2):
                    out.append(Hyperedge((a, b), float(e.weight), STANDARD))
            else:
                if e.spec.kind == "cardinality" and e.spec.table is not None:
                    e.spec.size_table(len(verts))
                out.append(Hyperedge(verts, float(e.weight), e.spec))
        self.edges: tuple[Hyperedge, ...] = tuple(out)
        if mu is None:
            mu = np.ones(n)
        mu = np.array(mu, dtype=float)
        if mu.shape != (n,) or np.any(~np.isfinite(mu)) or np.any(mu <= 0):
            raise DomainError("mu must be a positive vector of length n")
        mu.setflags(write=False)
        self.mu = mu
        self.edge_index = [np.array(e.vertices, dtype=np.int64) for e in self.edges]
        # w_h * delta_h(k) tables for cardinality-based edges, None for oracles
        self.edge_tables = [
            e.weight * e.spec.delta_table(e.rank) if e.spec.cardinality_based else None
            for e in self.edges
        ]
        inc = [[] for _ in range(n)]
        for k, e in enumerate(self.edges):
            for v in e.vertices:
                inc[v].append(k)
        self.incidence = [tuple(x) for x in inc]

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def volume(self) -> float:
        return float(self.mu.sum())

    @property
    def rank(self) -> int:
        return max((e.rank for e in self.edges), default=0)

    @property
    def sparsity(self) -> int:
        return sum(e.rank for e in self.edges)

    @property
    def all_standard(self) -> bool:
        return all(e.spec.kind == "standard" for e in self.edges)

    @property
    def all_cardinality_based(self) -> bool:
        return all(t is not None for t in self.edge_tables)

    def mask(self, S) -> np.ndarray:
        """Boolean indicator for a vertex set given as ids or as a mask."""
        a = np.asarray(S)
        if a.dtype == bool and a.shape == (self.n,):
            return a.copy()
        m = np.zeros(self.n, dtype=bool)
        ids = np.asarray(list(S) if not isinstance(S, np.ndarray) else S, dtype=np.int64).ravel()
        if ids.size and (ids.min() < 0 or ids.max() >= self.n):
            raise DomainError("vertex id out of range")
        m[ids] = True
        return m

    def edge_cut(self, k: int, in_S: np.ndarray) -> float:
        """w_h * delta_h(S cap h) for a boolean mask."""
        idx = self.edge_index[k]
        sel = in_S[idx]
        tab = self.edge_tables[k]
        if tab is not None:
            return float(tab[int(sel.sum())])
        e = self.edges[k]
        return e.weight * e.spec.delta(e.vertices, (int(v) for v in idx[sel]))

    def cut_value(self, S) -> float:
        in_S = self.mask(S)
        return float(sum(self.edge_cut(k, in_S) for k in range(self.m)))

    def components(self) -> list[list[int]]:
        parent = list(range(self.n))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.edges:
            r0 = find(e.vertices[0])
            for v in e.vertices[1:]:
                rv = find(v)
                if rv != r0:
                    parent[rv] = r0
        groups: dict[int, list[int]] = {}
        for v in range(self.n):
            groups.setdefault(find(v), []).append(v)
        return sorted(groups.values())

    def is_connected(self) -> bool:
        return len(self.components()) == 1

    def __repr__(self):
        return f"Hypergraph(n={self.n}, m={self.m}, rank={self.rank})"


# per-hyperedge operations -------------------------------------------------------

def _check_vector(h: Sequence[int], x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.shape != (len(h),):
        raise DomainError(f"vector of length {x.shape} does not match hyperedge of rank {len(h)}")
    return x


def evaluate_cut_fn(spec: CutFunctionSpec, h: Sequence[int], S: Iterable[int]) -> float:
    """delta_h(S) for S a subset of h (vertex ids)."""
    S = frozenset(S)
    if not S <= frozenset(h):
        raise DomainError("S is not a subset of the hyperedge")
    return spec.delta(tuple(h), S)


def _descending_order(h: Sequence[int], x: np.ndarray) -> np.ndarray:
    # descending x, ties by ascending vertex id
    return np.lexsort((np.asarray(h), -x))


def _chain_values(spec: CutFunctionSpec, h: Sequence[int], order: np.ndarray, which: str) -> np.ndarray:
    r = len(h)
    if spec.cardinality_based or (spec.kind == "clique" and which == "delta"):
        return spec.delta_table(r) if which == "delta" else spec.size_table(r)
    hv = [h[i] for i in order]
    fn = spec.delta if which == "delta" else spec.F
    return np.array([fn(tuple(h), hv[:i]) for i in range(r + 1)], dtype=float)


def lovasz_extension(spec: CutFunctionSpec, h: Sequence[int], x) -> float:
    """Lovasz extension of delta_h at x (x indexed like h)."""
    x = _check_vector(h, x)
    order = _descending_order(h, x)
    xs = x[order]
    d = _chain_values(spec, h, order, "delta")
    return float(np.dot(xs[:-1] - xs[1:], d[1:-1]))


def base_polytope_argmax(spec: CutFunctionSpec, h: Sequence[int], x) -> np.ndarray:
    """Greedy vertex y of B(delta_h) maximizing <y, x>."""
    x = _check_vector(h, x)
    order = _descending_order(h, x)
    d = _chain_values(spec, h, order, "delta")
    y = np.empty(len(h))
    y[order] = np.diff(d)
    return y


def f_norm(spec: CutFunctionSpec, h: Sequence[int], x) -> float:
    """||x||_F: Lovasz extension of F_h evaluated at |x|."""
    a = np.abs(_check_vector(h, x))
    order = _descending_order(h, a)
    a_sorted = np.append(a[order], 0.0)
    g = _chain_values(spec, h, order, "F")
    return float(np.dot(a_sorted[:-1] - a_sorted[1:], g[1:]))


def dual_f_norm(spec: CutFunctionSpec, h: Sequence[int], y) -> float:
    """max over nonempty S of sum_{i in S} |y_i| / F_h(S)."""
    a = np.abs(_check_vector(h, y))
    r = len(h)
    if spec.cardinality_based:
        # for a size-only F the best set of each size is the top-k entries
        g = spec.size_table(r)
        pref = np.cumsum(np.sort(a)[::-1])
        return float(np.max(pref / g[1:]))
    if spec.kind != "oracle":
        raise DomainError(f"{spec.kind} kind has no dual norm")
    if r > MAX_EXHAUSTIVE_RANK:
        raise UnsupportedRankError(f"rank {r} exceeds exhaustive cap {MAX_EXHAUSTIVE_RANK}")
    best = 0.0
    for bits in range(1, 1 << r):
        members = [i for i in range(r) if bits >> i & 1]
        val = spec.F(h, (h[i] for i in members))
        tot = float(a[members].sum())
        if val <= 0.0:
            if tot > 0.0:
                return math.inf
            continue
        best = max(best, tot / val)
    return best


def min_shift_f_norm(spec: CutFunctionSpec, h: Sequence[int], x, iters: int = 200) -> tuple[float, float]:
    """min over u of ||x - u 1||_F by ternary search on [min x, max x]; returns (value, u)."""
    x = _check_vector(h, x)
    lo, hi = float(x.min()), float(x.max())
    for _ in range(iters):
        a = lo + (hi - lo) / 3.0
        b = hi - (hi - lo) / 3.0
        if f_norm(spec, h, x - a) <= f_norm(spec, h, x - b):
            hi = b
        else:
            lo = a
    u = 0.5 * (lo + hi)
    return f_norm(spec, h, x - u), u


# graph-level operations --------------------------------------------------------

def cut_value(G: Hypergraph, S) -> float:
    return G.cut_value(S)


def ratio_cut(G: Hypergraph, S) -> float:
    """Psi_G(S) = delta_G(S) / min{mu(S), mu(V \\ S)}."""
    in_S = G.mask(S)
    muS = float(G.mu[in_S].sum())
    muC = float(G.mu[~in_S].sum())
    if not in_S.any() or in_S.all():
        raise DegenerateCutError("ratio cut undefined for empty or full sets")
    return G.cut_value(in_S) / min(muS, muC)


def graph_lovasz(G: Hypergraph, x) -> float:
    """sum_h w_h * Lovasz extension of delta_h at x restricted to h."""
    x = np.asarray(x, dtype=float)
    if x.shape != (G.n,):
        raise DomainError("vector length does not match vertex count")
    return float(
        sum(e.weight * lovasz_extension(e.spec, e.vertices, x[G.edge_index[k]]) for k, e in enumerate(G.edges))
    )


def min_shift_l1(x, mu) -> tuple[float, float]:
    """min over gamma of ||x - gamma 1||_{1,mu}; attained at a mu-weighted median (lower on ties)."""
    x = np.asarray(x, dtype=float)
    mu = np.asarray(mu, dtype=float)
    order = np.argsort(x, kind="stable")
    cum = np.cumsum(mu[order])
    k = int(np.searchsorted(cum, 0.5 * cum[-1] - 1e-12 * cum[-1]))
    gamma = float(x[order[k]])
    return float(np.dot(mu, np.abs(x - gamma))), gamma


def relaxed_ratio(G: Hypergraph, x) -> float:
    """Continuous ratio  Lovasz(x) / min_gamma ||x - gamma 1||_{1,mu}."""
    den, _ = min_shift_l1(x, G.mu)
    if den <= 0.0:
        raise DegenerateCutError("constant vector has no ratio")
    return graph_lovasz(G, x) / den


@dataclass(frozen=True)
class SweepResult:
    cut: tuple[int, ...]
    psi: float
    threshold: float


def sweep_cut_round(G: Hypergraph, x) -> SweepResult:
    """Best threshold set {i : x_i >= t} of x rescaled to [0, 1]."""
    x = np.asarray(x, dtype=float)
    if x.shape != (G.n,):
        raise DomainError("vector length does not match vertex count")
    lo, hi = float(x.min()), float(x.max())
    if not hi > lo:
        raise DegenerateCutError("constant vector has no threshold cut")
    xh = (x - lo) / (hi - lo)
    order = np.lexsort((np.arange(G.n), -xh))
    in_S = np.zeros(G.n, dtype=bool)
    counts = np.zeros(G.m, dtype=np.int64)
    oracle_edges = [k for k in range(G.m) if G.edge_tables[k] is None]
    cur = 0.0
    muS = 0.0
    vol = G.volume
    best = (math.inf, 0, 0.0)
    for pos in range(G.n - 1):
        v = int(order[pos])
        in_S[v] = True
        muS += G.mu[v]
        for k in G.incidence[v]:
            tab = G.edge_tables[k]
            if tab is not None:
                c = counts[k]
                cur += tab[c + 1] - tab[c]
                counts[k] = c + 1
        if xh[order[pos]] == xh[order[pos + 1]]:
            continue  # not a threshold boundary
        val = cur + sum(G.edge_cut(k, in_S) for k in oracle_edges)
        psi = val / min(muS, vol - muS)
        if psi < best[0]:
            best = (psi, pos + 1, float(xh[order[pos]]))
    psi, size, t = best
    return SweepResult(tuple(sorted(int(v) for v in order[:size])), float(psi), t)
