"""Hypergraph flows, the factor-graph flow network, and flow decomposition.

A hypergraph flow assigns each hyperedge h a vector y_h (indexed like the
hyperedge's sorted vertices) with sum(y_h) = 0.  Read on the factor graph,
(y_h)_i is the flow from variable vertex i into factor vertex h, so the
demand dem_i = sum_h (y_h)_i is the net outflow at i.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError, InvalidFlowError
from .exhaustive import all_cut_values, graph_cut_values, min_graph_ratio_cut
from .graphs import DemandGraph, WeightedGraph, normalized_lambda2
from .hypergraph import Hypergraph, dual_f_norm


@dataclass(frozen=True)
class FactorGraph:
    n_vars: int
    n_factors: int
    edges: tuple[tuple[int, int], ...]  # (variable i, factor node n + k)


def build_factor_graph(G: Hypergraph) -> FactorGraph:
    edges = tuple((v, G.n + k) for k, e in enumerate(G.edges) for v in e.vertices)
    return FactorGraph(G.n, G.m, edges)


@dataclass
class HypergraphFlow:
    y: list  # list of np.ndarray, one per hyperedge

    @classmethod
    def zeros(cls, G: Hypergraph) -> "HypergraphFlow":
        return cls([np.zeros(e.rank) for e in G.edges])

    def demand(self, G: Hypergraph) -> np.ndarray:
        dem = np.zeros(G.n)
        for k, yk in enumerate(self.y):
            np.add.at(dem, G.edge_index[k], yk)
        return dem

    def scaled(self, c: float) -> "HypergraphFlow":
        return HypergraphFlow([c * yk for yk in self.y])

    def conservation_error(self) -> float:
        return max((abs(float(yk.sum())) for yk in self.y), default=0.0)


def _check_flow(G: Hypergraph, Y: HypergraphFlow, tol: float):
    if len(Y.y) != G.m:
        raise InvalidFlowError("flow has wrong number of hyperedges")
    for k, yk in enumerate(Y.y):
        if np.shape(yk) != (G.edges[k].rank,):
            raise InvalidFlowError(f"flow on hyperedge {k} has wrong length")
        scale = max(1.0, float(np.abs(yk).max(initial=0.0)))
        if abs(float(np.sum(yk))) > tol * scale:
            raise InvalidFlowError(f"flow on hyperedge {k} is not conserved")


def edge_congestion(G: Hypergraph, Y: HypergraphFlow) -> np.ndarray:
    """||y_h||_{*,F_h} / w_h per hyperedge."""
    return np.array(
        [dual_f_norm(e.spec, e.vertices, Y.y[k]) / e.weight for k, e in enumerate(G.edges)]
    )


def congestion(G: Hypergraph, Y: HypergraphFlow) -> float:
    """Largest per-hyperedge congestion (0 for a hypergraph without edges)."""
    c = edge_congestion(G, Y)
    return float(c.max()) if c.size else 0.0


# flow network ------------------------------------------------------------------

@dataclass
class FlowNetwork:
    """Directed network for the seeded cut-improvement problem (standard cuts).

    Node layout: variables 0..n-1, factor inputs n..n+m-1, factor outputs
    n+m..n+2m-1, then source and sink.  Each hyperedge's throughput is
    bounded by the split arc (input -> output) of capacity w_h.
    """

    n: int
    m: int
    n_nodes: int
    source: int
    sink: int
    tail: np.ndarray
    head: np.ndarray
    cap: np.ndarray
    split_arc: np.ndarray
    in_arc: list
    out_arc: list
    source_arc: np.ndarray  # -1 where absent
    sink_arc: np.ndarray
    alpha: float = 0.0


class FlowTopology:
    """Arc structure for a fixed (G, s); capacities are filled in per alpha."""

    def __init__(self, G: Hypergraph, s):
        if not G.all_standard:
            raise DomainError("the flow network models standard cut functions only")
        s = np.asarray(s, dtype=float)
        n, m = G.n, G.m
        self.G, self.s = G, s
        self.source, self.sink = n + 2 * m, n + 2 * m + 1
        tail, head, cap = [], [], []
        split = np.empty(m, dtype=np.int64)
        for k, e in enumerate(G.edges):
            split[k] = len(tail)
            tail.append(n + k)
            head.append(n + m + k)
            cap.append(e.weight)
        in_arc, out_arc = [], []
        for k, e in enumerate(G.edges):
            ia, oa = [], []
            for v in e.vertices:
                ia.append(len(tail))
                tail.append(v)
                head.append(n + k)
                cap.append(0.0)
                oa.append(len(tail))
                tail.append(n + m + k)
                head.append(v)
                cap.append(0.0)
            in_arc.append(np.array(ia, dtype=np.int64))
            out_arc.append(np.array(oa, dtype=np.int64))
        src = np.full(n, -1, dtype=np.int64)
        snk = np.full(n, -1, dtype=np.int64)
        for i in range(n):
            if s[i] >= 0:
                src[i] = len(tail)
                tail.append(self.source)
                head.append(i)
            else:
                snk[i] = len(tail)
                tail.append(i)
                head.append(self.sink)
            cap.append(0.0)
        self.tail = np.array(tail, dtype=np.int64)
        self.head = np.array(head, dtype=np.int64)
        self.base_cap = np.array(cap)
        self.split_arc, self.in_arc, self.out_arc = split, in_arc, out_arc
        self.source_arc, self.sink_arc = src, snk
        self.factor_arcs = np.concatenate(in_arc + out_arc) if m else np.zeros(0, dtype=np.int64)
        self.weights = np.array([e.weight for e in G.edges])

    def network(self, alpha: float) -> FlowNetwork:
        G, s = self.G, self.s
        cap = self.base_cap.copy()
        terminal = alpha * G.mu * np.abs(s)
        has_src = self.source_arc >= 0
        cap[self.source_arc[has_src]] = terminal[has_src]
        cap[self.sink_arc[~has_src]] = terminal[~has_src]
        # uncapacitated factor arcs: anything above the total source capacity
        cap[self.factor_arcs] = float(terminal[has_src].sum()) + float(self.weights.sum()) + 1.0
        return FlowNetwork(
            G.n, G.m, G.n + 2 * G.m + 2, self.source, self.sink, self.tail, self.head, cap,
            self.split_arc, self.in_arc, self.out_arc, self.source_arc, self.sink_arc, float(alpha),
        )


def build_flow_network(G: Hypergraph, s, alpha: float) -> FlowNetwork:
    return FlowTopology(G, s).network(alpha)


@dataclass
class MaxFlowResult:
    value: float
    arc_flow: np.ndarray
    source_side: np.ndarray  # bool per network node
    cut_capacity: float

    def vertex_side(self, n: int) -> np.ndarray:
        return self.source_side[:n].copy()


def max_flow(net: FlowNetwork, backend=None, scaling: bool = True) -> MaxFlowResult:
    """Exact max-flow with its min cut (source side = residual reachability)."""
    impl = _kernels if backend is None else _kernels.get_backend(backend)
    scale = max(1.0, float(net.cap.max(initial=0.0)))
    value, flow, side = impl.max_flow_arrays(
        net.n_nodes, net.tail, net.head, net.cap, net.source, net.sink, 1e-13 * scale, scaling
    )
    crossing = side[net.tail] & ~side[net.head]
    cut_cap = float(net.cap[crossing].sum())
    if abs(cut_cap - value) > 1e-8 * max(1.0, cut_cap):
        raise RuntimeError(f"max-flow {value} does not match min-cut {cut_cap}")
    return MaxFlowResult(float(value), flow, side, cut_cap)


def network_flow_to_hypergraph(net: FlowNetwork, res: MaxFlowResult) -> HypergraphFlow:
    f = res.arc_flow
    return HypergraphFlow([f[net.in_arc[k]] - f[net.out_arc[k]] for k in range(net.m)])


# decomposition -----------------------------------------------------------------

def flow_path_decompose(G: Hypergraph, Y: HypergraphFlow, tol: float = 1e-10) -> DemandGraph:
    """Strip the flow into source-to-sink paths on the factor graph.

    Cycles met along the way are cancelled into ``circulation``; they carry
    no demand.  The result H has deg_H(i) = |dem_i(Y)| and is bipartite
    between positive- and negative-demand vertices.
    """
    _check_flow(G, Y, 1e-7)
    n = G.n
    scale = max([1.0] + [float(np.abs(yk).max(initial=0.0)) for yk in Y.y])
    thr = tol * scale
    out = [dict() for _ in range(n + G.m)]
    pos = [{v: p for p, v in enumerate(e.vertices)} for e in G.edges]
    for k, yk in enumerate(Y.y):
        for p, v in enumerate(G.edges[k].vertices):
            val = float(yk[p])
            if val > thr:
                out[v][n + k] = val
            elif val < -thr:
                out[n + k][v] = -val
    dem = Y.demand(G)
    excess = np.where(dem > thr, dem, 0.0)
    deficit = np.where(dem < -thr, -dem, 0.0)
    circ = [np.zeros(e.rank) for e in G.edges]
    H = DemandGraph(n)

    def record(target, a, b, amt):
        # hop a -> b on the factor graph
        if a < n:
            k = b - n
            target[k][pos[k][a]] += amt
        else:
            k = a - n
            target[k][pos[k][b]] -= amt

    def take(a, b, amt):
        left = out[a][b] - amt
        if left > thr:
            out[a][b] = left
        else:
            del out[a][b]

    for src in range(n):
        while excess[src] > thr:
            path = [src]
            onpath = {src: 0}
            while True:
                u = path[-1]
                if u < n and deficit[u] > thr:
                    break
                if not out[u]:
                    # numerical dust: drop the dead arc and back up
                    if len(path) == 1:
                        break
                    path.pop()
                    del onpath[u]
                    out[path[-1]].pop(u, None)
                    continue
                nxt = min(out[u])
                if nxt in onpath:
                    cyc = path[onpath[nxt]:] + [nxt]
                    amt = min(out[a][b] for a, b in zip(cyc, cyc[1:]))
                    for a, b in zip(cyc, cyc[1:]):
                        take(a, b, amt)
                        record(circ, a, b, amt)
                    for v in path[onpath[nxt] + 1:]:
                        del onpath[v]
                    del path[onpath[nxt] + 1:]
                    continue
                onpath[nxt] = len(path)
                path.append(nxt)
            end = path[-1]
            if end >= n or deficit[end] <= thr:
                excess[src] = 0.0
                break
            amt = min([excess[src], deficit[end]] + [out[a][b] for a, b in zip(path, path[1:])])
            key = (min(src, end), max(src, end))
            if key not in H.edge_flows:
                H.edge_flows[key] = (src, end, {})
            flows = H.edge_flows[key][2]
            for a, b in zip(path, path[1:]):
                take(a, b, amt)
                k = (b if a < n else a) - n
                if k not in flows:
                    flows[k] = np.zeros(G.edges[k].rank)
                record({k: flows[k]}, a, b, amt)
            H.add_edge(src, end, amt)
            excess[src] -= amt
            deficit[end] -= amt
    # with all demand routed, what remains is a circulation
    for a in range(n + G.m):
        for b, amt in out[a].items():
            record(circ, a, b, amt)
    H.circulation = tuple(circ)
    return H


def sum_edge_flows(G: Hypergraph, H: DemandGraph) -> HypergraphFlow:
    """sum_e Y^e as a hypergraph flow."""
    acc = [np.zeros(e.rank) for e in G.edges]
    for _, _, flows in H.edge_flows.values():
        for k, vec in flows.items():
            acc[k] += vec
    return HypergraphFlow(acc)


def edge_flow_congestion(G: Hypergraph, H: DemandGraph) -> float:
    """max_h ||sum_e |y^e_h| ||_{*,F_h} / w_h."""
    acc = [np.zeros(e.rank) for e in G.edges]
    for _, _, flows in H.edge_flows.values():
        for k, vec in flows.items():
            acc[k] += np.abs(vec)
    return congestion(G, HypergraphFlow(acc))


# embedding verification --------------------------------------------------------

@dataclass
class EmbeddingReport:
    valid: bool
    mode: str
    checked: int
    violations: int
    worst_ratio: float
    worst_cut: tuple
    rho: float
    psi_h_star: float | None
    spectral_bound: float
    lower_bound: float


def verify_flow_embedding(G: Hypergraph, H: WeightedGraph, rho: float, mode: str = "auto",
                          samples: int = 4096, rng=None, tol: float = 1e-9) -> EmbeddingReport:
    """Check delta_H(S) <= rho * delta_G(S) over cuts and report the implied lower bound.

    The bound is Psi*_G >= Psi*_H / rho; Psi*_H is exact in exhaustive mode and
    replaced by the spectral bound lambda_2 / 2 otherwise.
    """
    n = G.n
    if mode == "auto":
        mode = "exhaustive" if n <= 20 else "sampled"
    lam = normalized_lambda2(H, G.mu) if n >= 2 else 0.0
    spectral = lam / 2.0
    if mode == "exhaustive":
        cg = all_cut_values(G)
        ch = graph_cut_values(n, H.edges)
        idx = np.arange(1, (1 << n) - 1)
        cg, ch = cg[idx], ch[idx]
    elif mode == "sampled":
        rng = np.random.default_rng(0) if rng is None else rng
        masks = rng.random((samples, n)) < 0.5
        keep = masks.any(axis=1) & ~masks.all(axis=1)
        masks = masks[keep]
        cg = np.array([G.cut_value(mk) for mk in masks])
        ch = np.array([H.cut_value(mk) for mk in masks])
        idx = masks
    else:
        raise DomainError(f"unknown verification mode {mode!r}")
    viol = ch > rho * cg * (1.0 + tol) + tol
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(cg > 0, ch / np.where(cg > 0, cg, 1.0), np.where(ch > tol, np.inf, 0.0))
    worst = int(np.argmax(ratio)) if ratio.size else 0
    if ratio.size:
        if mode == "exhaustive":
            wc = tuple(i for i in range(n) if int(idx[worst]) >> i & 1)
        else:
            wc = tuple(int(i) for i in np.flatnonzero(idx[worst]))
        wr = float(ratio[worst])
    else:
        wc, wr = (), 0.0
    psi_h = None
    if mode == "exhaustive" and n >= 2:
        psi_h, _ = min_graph_ratio_cut(n, H.edges, G.mu)
    base = psi_h if psi_h is not None else spectral
    lb = base / rho if rho > 0 else 0.0
    return EmbeddingReport(
        valid=not bool(viol.any()), mode=mode, checked=int(len(cg)), violations=int(viol.sum()),
        worst_ratio=wr, worst_cut=wc, rho=float(rho), psi_h_star=psi_h, spectral_bound=spectral,
        lower_bound=float(lb),
    )
