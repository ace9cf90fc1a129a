"""Weighted undirected graphs used for demand graphs and certificates."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass
class WeightedGraph:
    n: int
    edges: dict = field(default_factory=dict)  # (i, j) with i < j -> weight

    def add_edge(self, i: int, j: int, w: float):
        if i == j or w == 0.0:
            return
        key = (i, j) if i < j else (j, i)
        self.edges[key] = self.edges.get(key, 0.0) + float(w)

    @property
    def total_weight(self) -> float:
        return float(sum(self.edges.values()))

    def degrees(self) -> np.ndarray:
        d = np.zeros(self.n)
        for (i, j), w in self.edges.items():
            d[i] += w
            d[j] += w
        return d

    def laplacian(self) -> np.ndarray:
        L = np.zeros((self.n, self.n))
        for (i, j), w in self.edges.items():
            L[i, i] += w
            L[j, j] += w
            L[i, j] -= w
            L[j, i] -= w
        return L

    def normalized_laplacian(self, mu) -> np.ndarray:
        """M^{-1/2} L M^{-1/2}."""
        r = 1.0 / np.sqrt(np.asarray(mu, dtype=float))
        return self.laplacian() * np.outer(r, r)

    def scaled(self, c: float) -> "WeightedGraph":
        return WeightedGraph(self.n, {k: w * c for k, w in self.edges.items()})

    def merged(self, other: "WeightedGraph") -> "WeightedGraph":
        out = WeightedGraph(self.n, dict(self.edges))
        for (i, j), w in other.edges.items():
            out.add_edge(i, j, w)
        return out

    def cut_value(self, in_S) -> float:
        in_S = np.asarray(in_S, dtype=bool)
        return float(sum(w for (i, j), w in self.edges.items() if in_S[i] != in_S[j]))

    def to_list(self) -> list:
        return [[i, j, w] for (i, j), w in sorted(self.edges.items())]

    @classmethod
    def from_list(cls, n: int, rows) -> "WeightedGraph":
        g = cls(n)
        for i, j, w in rows:
            g.add_edge(int(i), int(j), float(w))
        return g


@dataclass
class DemandGraph(WeightedGraph):
    """Graph produced by path-stripping a hypergraph flow.

    ``edge_flows[(i, j)] = (src, dst, {k: y_k})`` holds the hyperedge flow
    routed along that edge, oriented so its demand is w (1_src - 1_dst).
    ``circulation`` is the cycle part removed before stripping.
    """

    edge_flows: dict = field(default_factory=dict)
    circulation: tuple = ()


def lambda2(L: np.ndarray) -> float:
    """Second-smallest eigenvalue of a symmetric matrix."""
    if L.shape[0] < 2:
        return 0.0
    return float(np.linalg.eigvalsh(L)[1])


def normalized_lambda2(H: WeightedGraph, mu) -> float:
    return lambda2(H.normalized_laplacian(mu))
