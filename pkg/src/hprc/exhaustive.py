"""Exhaustive enumeration over all 2^n vertex subsets (small n only).

Subset S is encoded as the integer sum_{i in S} 2^i.
"""
from __future__ import annotations

import numpy as np

from . import _kernels
from .errors import DegenerateCutError, UnsupportedRankError
from .hypergraph import Hypergraph

MAX_EXHAUSTIVE_N = 22


def _check_n(n: int):
    if n > MAX_EXHAUSTIVE_N:
        raise UnsupportedRankError(f"n = {n} exceeds exhaustive cap {MAX_EXHAUSTIVE_N}")


def subset_sums(values) -> np.ndarray:
    """sum_{i in S} values[i] for every subset S."""
    out = np.zeros(1, dtype=float)
    for v in np.asarray(values, dtype=float):
        out = np.concatenate([out, out + v])
    return out


def mask_to_ids(bits: int, n: int) -> tuple[int, ...]:
    return tuple(i for i in range(n) if bits >> i & 1)


def all_cut_values(G: Hypergraph) -> np.ndarray:
    """delta_G(S) for every subset S."""
    _check_n(G.n)
    card = [k for k in range(G.m) if G.edge_tables[k] is not None]
    out = np.zeros(1 << G.n)
    if card:
        width = max(G.edges[k].rank for k in card) + 1
        tables = np.zeros((len(card), width))
        masks = np.zeros(len(card), dtype=np.uint64)
        for row, k in enumerate(card):
            tab = G.edge_tables[k]
            tables[row, : len(tab)] = tab
            masks[row] = np.uint64(sum(1 << v for v in G.edges[k].vertices))
        out += _kernels.subset_cut_values(G.n, masks, tables)
    oracle = [k for k in range(G.m) if G.edge_tables[k] is None]
    if oracle:
        subsets = np.arange(1 << G.n, dtype=np.int64)
        for k in oracle:
            e = G.edges[k]
            if e.rank > 20:
                raise UnsupportedRankError("oracle hyperedge too large for enumeration")
            local = np.zeros_like(subsets)
            for pos, v in enumerate(e.vertices):
                local |= ((subsets >> v) & 1) << pos
            tab = np.array(
                [e.weight * e.spec.delta(e.vertices, mask_to_ids_in(e.vertices, b)) for b in range(1 << e.rank)]
            )
            out += tab[local]
    return out


def mask_to_ids_in(vertices, bits: int) -> tuple[int, ...]:
    return tuple(v for pos, v in enumerate(vertices) if bits >> pos & 1)


def graph_cut_values(n: int, edges: dict) -> np.ndarray:
    """Cut weight of every subset for a weighted graph {(i, j): w}."""
    _check_n(n)
    if not edges:
        return np.zeros(1 << n)
    items = sorted(edges.items())
    masks = np.array([(1 << i) | (1 << j) for (i, j), _ in items], dtype=np.uint64)
    tables = np.array([[0.0, w, 0.0] for _, w in items])
    return _kernels.subset_cut_values(n, masks, tables)


def _proper(n: int) -> np.ndarray:
    idx = np.arange(1 << n)
    return (idx > 0) & (idx < (1 << n) - 1)


def min_ratio_from_values(cuts: np.ndarray, mu) -> tuple[float, int]:
    n = len(mu)
    muS = subset_sums(mu)
    den = np.minimum(muS, muS[-1] - muS)
    ok = _proper(n)
    if not ok.any():
        raise DegenerateCutError("no proper cut on a single vertex")
    ratio = np.full(cuts.shape, np.inf)
    ratio[ok] = cuts[ok] / den[ok]
    best = int(np.argmin(ratio))
    return float(ratio[best]), best


def min_ratio_cut(G: Hypergraph) -> tuple[float, int]:
    """(Psi*_G, minimizing subset as bitmask)."""
    return min_ratio_from_values(all_cut_values(G), G.mu)


def min_graph_ratio_cut(n: int, edges: dict, mu) -> tuple[float, int]:
    return min_ratio_from_values(graph_cut_values(n, edges), mu)


def min_seeded_ratio(G: Hypergraph, s, cuts: np.ndarray | None = None) -> tuple[float, int]:
    """(min over S of delta_G(S) / |<s, 1_S>_mu|, minimizer) over sets with nonzero correlation."""
    if cuts is None:
        cuts = all_cut_values(G)
    corr = np.abs(subset_sums(np.asarray(G.mu) * np.asarray(s)))
    ok = corr > 1e-12 * max(1.0, float(corr.max()))
    ratio = np.full(cuts.shape, np.inf)
    ratio[ok] = cuts[ok] / corr[ok]
    best = int(np.argmin(ratio))
    return float(ratio[best]), best


def min_ci_primal(G: Hypergraph, s, alpha: float, cuts: np.ndarray | None = None) -> tuple[float, int]:
    """min over T of delta_G(T) - alpha <s, 1_T>_mu and a minimizer."""
    if cuts is None:
        cuts = all_cut_values(G)
    obj = cuts - alpha * subset_sums(np.asarray(G.mu) * np.asarray(s))
    best = int(np.argmin(obj))
    return float(obj[best]), best
