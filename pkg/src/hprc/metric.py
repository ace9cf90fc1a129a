"""Metric relaxation of ratio cut: vectors with squared-l2 triangle
inequalities, a spreading constraint, and per-hyperedge length vectors.

    minimize   sum_h w_h ||l^h||_{F_h}
    subject to ||v_i - v_j||^2 <= l^h_i + l^h_j      (i, j in h)
               ||v_i - v_j||^2 <= ||v_i - v_k||^2 + ||v_k - v_j||^2
               sum_{i<j} mu_i mu_j / mu(V) ||v_i - v_j||^2 >= 1
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DegenerateCutError, DomainError, NoShiftError
from .hypergraph import (Hypergraph, SweepResult, f_norm, min_shift_f_norm, min_shift_l1,
                         sweep_cut_round)


@dataclass
class MetricSolution:
    vectors: np.ndarray  # n x k
    lengths: list  # one array per hyperedge, indexed like its vertices

    def to_json(self) -> dict:
        return {
            "vectors": [[float(v) for v in row] for row in self.vectors],
            "lengths": {str(k): [float(v) for v in l] for k, l in enumerate(self.lengths)},
        }

    @classmethod
    def from_json(cls, G: Hypergraph, data: dict) -> "MetricSolution":
        try:
            V = np.array(data["vectors"], dtype=float)
            raw = data["lengths"]
        except (KeyError, TypeError, ValueError) as exc:
            raise DomainError(f"malformed metric solution: {exc}") from exc
        if V.ndim != 2 or V.shape[0] != G.n:
            raise DomainError("vectors must be an n-row matrix")
        lengths = []
        for k, e in enumerate(G.edges):
            vec = raw.get(str(k)) if isinstance(raw, dict) else raw[k]
            if vec is None or len(vec) != e.rank:
                raise DomainError(f"missing or wrong-length lengths for hyperedge {k}")
            lengths.append(np.array(vec, dtype=float))
        return cls(V, lengths)


def metric_objective(G: Hypergraph, sol: MetricSolution) -> float:
    return float(sum(e.weight * f_norm(e.spec, e.vertices, sol.lengths[k]) for k, e in enumerate(G.edges)))


def feasible_from_cut(G: Hypergraph, S) -> MetricSolution:
    """Scaled cut metric of S; its objective is at most 2 Psi_G(S)."""
    in_S = G.mask(S)
    if not in_S.any() or in_S.all():
        raise DegenerateCutError("cut must be proper")
    muS, muC = float(G.mu[in_S].sum()), float(G.mu[~in_S].sum())
    if muS > muC:
        in_S, muS, muC = ~in_S, muC, muS
    c = G.volume / (muS * muC)
    V = np.zeros((G.n, G.n))
    V[in_S, 0] = np.sqrt(c)
    lengths = []
    for k, e in enumerate(G.edges):
        sel = in_S[G.edge_index[k]]
        inside = tuple(v for v, b in zip(e.vertices, sel) if b)
        outside = tuple(v for v, b in zip(e.vertices, sel) if not b)
        side = sel if e.spec.F(e.vertices, inside) <= e.spec.F(e.vertices, outside) else ~sel
        lengths.append(c * side.astype(float))
    return MetricSolution(V, lengths)


@dataclass
class MetricReport:
    feasible: bool
    spread: float
    spread_violation: float
    pair_violation: float
    triangle_violation: float
    objective: float


def check_metric_feasibility(G: Hypergraph, sol: MetricSolution, tol: float = 1e-7) -> MetricReport:
    V = np.asarray(sol.vectors, dtype=float)
    mu = G.mu
    sq = np.einsum("ij,ij->i", V, V)
    D = np.maximum(sq[:, None] + sq[None, :] - 2.0 * V @ V.T, 0.0)
    np.fill_diagonal(D, 0.0)
    spread = float(0.5 * (mu @ D @ mu) / G.volume)
    pair = 0.0
    for k, e in enumerate(G.edges):
        idx = G.edge_index[k]
        l = np.asarray(sol.lengths[k], dtype=float)
        viol = D[np.ix_(idx, idx)] - (l[:, None] + l[None, :])
        np.fill_diagonal(viol, -np.inf)
        pair = max(pair, float(viol.max()))
    tri = 0.0
    for k in range(G.n):
        # D_ij - D_ik - D_kj for all i, j at once
        tri = max(tri, float((D - D[:, k][:, None] - D[k, :][None, :]).max()))
    sv = max(0.0, 1.0 - spread)
    ok = sv <= tol and pair <= tol and tri <= tol
    return MetricReport(ok, spread, sv, pair, tri, metric_objective(G, sol))


def optimal_shift(x, y, tol: float = 1e-12) -> float:
    """A nu with |x_i - nu| <= y_i for all i: the midpoint of the intersection of the intervals."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1 or x.size == 0:
        raise DomainError("x and y must be equal-length vectors")
    if np.any(y < 0):
        raise DomainError("y must be non-negative")
    lo, hi = float(np.max(x - y)), float(np.min(x + y))
    if lo > hi + tol * max(1.0, abs(lo), abs(hi)):
        raise NoShiftError("intervals have empty intersection")
    return 0.5 * (lo + hi)


@dataclass
class LineRounding:
    sweep: SweepResult
    surrogate: float


def round_line_embedding(G: Hypergraph, x) -> LineRounding:
    """Sweep a line embedding; the returned cut has Psi <= 2 * surrogate, where
    surrogate = sum_h w_h min_nu ||x_h - nu 1||_F / min_gamma ||x - gamma 1||_{1,mu}."""
    x = np.asarray(x, dtype=float)
    den, _ = min_shift_l1(x, G.mu)
    if den <= 0.0:
        raise DegenerateCutError("constant embedding")
    num = sum(e.weight * min_shift_f_norm(e.spec, e.vertices, x[G.edge_index[k]])[0] for k, e in enumerate(G.edges))
    return LineRounding(sweep_cut_round(G, x), float(num) / den)
