"""Seeded cut improvement: find a cut well correlated with a seed vector and
a hypergraph flow proving no cut does much better.

For a seed s with <s, 1>_mu = 0 the objective is
    Psi_{G,s}(S) = delta_G(S) / |<s, 1_S>_mu|.
For standard cut functions the problem is solved on a flow network with
exact max-flow; other cut functions use exhaustive enumeration (small n)
for the primal side and a linear program over the base polytopes for the
dual flow.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import (DegenerateCutError, DomainError, InvalidSeedError,
                     UndefinedObjectiveError, UnsupportedRankError)
from .exhaustive import MAX_EXHAUSTIVE_N, all_cut_values, mask_to_ids, min_ci_primal
from .flow import FlowTopology, HypergraphFlow, max_flow, network_flow_to_hypergraph
from .hypergraph import CutFunctionSpec, Hypergraph

MAX_LP_RANK = 12
SATURATION_RTOL = 1e-9


def seed_from_cut(G: Hypergraph, A) -> np.ndarray:
    """s = 1_A - (mu(A)/mu(A^c)) 1_{A^c}, with sides swapped so that mu(A) <= mu(A^c)."""
    in_A = G.mask(A)
    if not in_A.any() or in_A.all():
        raise DegenerateCutError("seed cut must be proper")
    muA, muC = float(G.mu[in_A].sum()), float(G.mu[~in_A].sum())
    if muA > muC:
        in_A, muA, muC = ~in_A, muC, muA
    return np.where(in_A, 1.0, -muA / muC)


def check_seed(G: Hypergraph, s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    if s.shape != (G.n,):
        raise InvalidSeedError("seed length does not match vertex count")
    scale = float(np.dot(G.mu, np.abs(s)))
    if scale == 0.0:
        raise InvalidSeedError("seed is zero")
    if abs(float(np.dot(G.mu, s))) > 1e-9 * scale:
        raise InvalidSeedError("seed is not mu-orthogonal to the all-ones vector")
    return s


def ci_objective(G: Hypergraph, s, S) -> float:
    """delta_G(S) / |<s, 1_S>_mu|."""
    in_S = G.mask(S)
    corr = float(np.dot(G.mu * np.asarray(s, dtype=float), in_S))
    if abs(corr) <= 1e-12 * float(np.dot(G.mu, np.abs(s))):
        raise UndefinedObjectiveError("cut has zero correlation with the seed")
    return G.cut_value(in_S) / abs(corr)


def quotient_score(G: Hypergraph, A, S) -> float:
    """delta_G(S) / |mu(A & S) - (mu(A)/mu(A^c)) mu(A^c & S)| (no side swap)."""
    in_A, in_S = G.mask(A), G.mask(S)
    muA, muC = float(G.mu[in_A].sum()), float(G.mu[~in_A].sum())
    den = abs(float(G.mu[in_A & in_S].sum()) - muA / muC * float(G.mu[~in_A & in_S].sum()))
    if den == 0.0:
        raise UndefinedObjectiveError("cut has zero correlation with the seed set")
    return G.cut_value(in_S) / den


@dataclass
class CISolution:
    """alpha: certified value, dem(Y) = alpha mu s and y_h in w_h B(delta_h).
    alpha_upper: Psi_{G,s}(cut) >= Psi*_{G,s} >= alpha.
    """

    alpha: float
    alpha_upper: float
    cut: tuple
    psi_s: float
    Y: HypergraphFlow
    iterations: int
    method: str
    trace: list = field(default_factory=list)


def _positive_mask(s: np.ndarray) -> np.ndarray:
    return s > 0


def solve_ci(G: Hypergraph, s, eps: float = 0.1, method: str = "auto", backend=None) -> CISolution:
    """Bracket Psi*_{G,s} within a factor 1 + eps/8 by multiplicative bisection on alpha."""
    if not (0.0 < eps < 1.0):
        raise DomainError("eps must lie in (0, 1)")
    s = check_seed(G, s)
    if method == "auto":
        method = "flow" if G.all_standard else "exhaustive"
    if method == "flow":
        return _solve_flow(G, s, eps, backend)
    if method == "exhaustive":
        return _solve_exhaustive(G, s, eps)
    raise DomainError(f"unknown method {method!r}")


def _bisect(G, s, eps, probe):
    """Shared bisection. probe(alpha) -> (feasible, witness_mask_or_None, payload)."""
    start = _positive_mask(s)
    hi_cut = start
    hi = ci_objective(G, s, start)
    trace = []
    if hi == 0.0:
        return 0.0, None, hi, hi_cut, trace
    lo = min(1.0 / G.volume, hi / (1.0 + eps / 8.0))
    lo_payload = None
    # find a feasible lower end
    while lo_payload is None:
        ok, cut, payload = probe(lo)
        trace.append((lo, ok))
        if ok:
            lo_payload = payload
            break
        psi = ci_objective(G, s, cut)
        if psi < hi:
            hi, hi_cut = psi, cut
        if hi <= 0.0:
            return 0.0, None, 0.0, hi_cut, trace
        lo = min(lo, hi) / 2.0
    while hi / lo > 1.0 + eps / 8.0:
        mid = math.sqrt(lo * hi)
        ok, cut, payload = probe(mid)
        trace.append((mid, ok))
        if ok:
            lo, lo_payload = mid, payload
        else:
            try:
                psi = ci_objective(G, s, cut)
            except UndefinedObjectiveError:
                psi = math.inf
            if psi < hi:
                hi, hi_cut = psi, cut
            else:  # numerically borderline; keep the old witness
                hi = min(hi, mid)
    return lo, lo_payload, hi, hi_cut, trace


def _finish(G, s, lo, Y, hi_cut, trace, method):
    psi = ci_objective(G, s, hi_cut)
    cut = tuple(int(i) for i in np.flatnonzero(hi_cut))
    if Y is None:
        Y = HypergraphFlow.zeros(G)
    return CISolution(float(lo), float(psi), cut, float(psi), Y, len(trace), method, trace)


def _solve_flow(G, s, eps, backend):
    topo = FlowTopology(G, s)
    P = float(np.dot(G.mu, np.where(s > 0, s, 0.0)))

    def probe(alpha):
        net = topo.network(alpha)
        res = max_flow(net, backend=backend)
        if res.value >= alpha * P * (1.0 - SATURATION_RTOL):
            return True, None, network_flow_to_hypergraph(net, res)
        return False, res.vertex_side(G.n), None

    lo, Y, hi, hi_cut, trace = _bisect(G, s, eps, probe)
    return _finish(G, s, lo, Y, hi_cut, trace, "flow")


def _solve_exhaustive(G, s, eps):
    if G.n > MAX_EXHAUSTIVE_N:
        raise UnsupportedRankError(f"exhaustive path needs n <= {MAX_EXHAUSTIVE_N}")
    if G.rank > MAX_LP_RANK:
        raise UnsupportedRankError(f"exhaustive path needs rank <= {MAX_LP_RANK}")
    cuts = all_cut_values(G)
    scale = float(cuts.max(initial=0.0)) + 1.0

    def probe(alpha):
        val, bits = min_ci_primal(G, s, alpha, cuts)
        if val >= -1e-12 * scale:
            return True, None, True
        return False, G.mask(mask_to_ids(bits, G.n)), None

    lo, ok, hi, hi_cut, trace = _bisect(G, s, eps, probe)
    Y = None
    if ok:
        beta, Ylp = dual_flow_lp(G, s)
        if beta > 0.0:
            lo = min(lo, beta)
            Y = Ylp.scaled(lo / beta)
    return _finish(G, s, lo, Y, hi_cut, trace, "exhaustive")


def _subset_rows(e):
    r = e.rank
    for size in range(1, r):
        for members in itertools.combinations(range(r), size):
            yield members, e.weight * e.spec.delta(e.vertices, (e.vertices[i] for i in members))


def dual_flow_lp(G: Hypergraph, s) -> tuple[float, HypergraphFlow]:
    """max beta s.t. dem(Y) = beta mu s and y_h in w_h B(delta_h) for every h."""
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    offsets = np.cumsum([0] + [e.rank for e in G.edges])
    nvar = int(offsets[-1]) + 1  # last variable is beta
    rows, cols, vals, rhs = [], [], [], []
    r_idx = 0
    for k, e in enumerate(G.edges):
        for members, bound in _subset_rows(e):
            for i in members:
                rows.append(r_idx)
                cols.append(offsets[k] + i)
                vals.append(1.0)
            rhs.append(bound)
            r_idx += 1
    A_ub = coo_matrix((vals, (rows, cols)), shape=(r_idx, nvar)).tocsr()
    rows, cols, vals = [], [], []
    for k, e in enumerate(G.edges):
        for p in range(e.rank):
            rows.append(k)
            cols.append(offsets[k] + p)
            vals.append(1.0)
    for k, e in enumerate(G.edges):
        for p, v in enumerate(e.vertices):
            rows.append(G.m + v)
            cols.append(offsets[k] + p)
            vals.append(1.0)
    for v in range(G.n):
        rows.append(G.m + v)
        cols.append(nvar - 1)
        vals.append(-G.mu[v] * s[v])
    A_eq = coo_matrix((vals, (rows, cols)), shape=(G.m + G.n, nvar)).tocsr()
    c = np.zeros(nvar)
    c[-1] = -1.0
    bounds = [(None, None)] * (nvar - 1) + [(0.0, None)]
    res = linprog(c, A_ub=A_ub, b_ub=np.array(rhs), A_eq=A_eq, b_eq=np.zeros(G.m + G.n),
                  bounds=bounds, method="highs")
    if res.status != 0:
        raise RuntimeError(f"dual LP failed: {res.message}")
    x = res.x
    Y = HypergraphFlow([x[offsets[k]:offsets[k + 1]].copy() for k in range(G.m)])
    return float(x[-1]), Y


# validation --------------------------------------------------------------------

def base_polytope_violation(spec: CutFunctionSpec, h, y, scale: float = 1.0) -> float:
    """Largest violation of y in scale * B(delta_h) (0 when inside)."""
    y = np.asarray(y, dtype=float)
    r = len(h)
    viol = abs(float(y.sum()))
    if spec.cardinality_based:
        tab = scale * spec.delta_table(r)
        pref = np.cumsum(np.sort(y)[::-1])[:-1]
        return max(viol, float(np.max(pref - tab[1:r], initial=0.0)))
    if r > 20:
        raise UnsupportedRankError("oracle hyperedge too large for exhaustive check")
    for size in range(1, r):
        for members in itertools.combinations(range(r), size):
            val = scale * spec.delta(h, (h[i] for i in members))
            viol = max(viol, float(y[list(members)].sum()) - val)
    return viol


@dataclass
class ValidationReport:
    items: dict  # name -> (passed, residual)

    @property
    def passed(self) -> bool:
        return all(ok for ok, _ in self.items.values())


def validate_primal_dual(G: Hypergraph, s, sol: CISolution, eps: float, tol: float = 1e-7) -> ValidationReport:
    """Check the five conditions tying the cut, the flow and alpha together."""
    s = np.asarray(s, dtype=float)
    alpha = sol.alpha
    ms = G.mu * s
    dem = sol.Y.demand(G)
    items = {}
    v1 = max((base_polytope_violation(e.spec, e.vertices, sol.Y.y[k], e.weight) for k, e in enumerate(G.edges)),
             default=0.0)
    items["base_polytope"] = (v1 <= tol * max(1.0, max((e.weight for e in G.edges), default=1.0)), v1)
    lhs = float(np.abs(dem - alpha * ms).sum())
    rhs = eps / 8.0 * alpha * float(np.abs(ms).sum())
    items["demand_l1"] = (lhs <= rhs + tol * max(1.0, alpha * float(np.abs(ms).sum())), lhs - rhs)
    over = np.where(s >= 0, dem - alpha * ms, alpha * ms - dem)
    v3 = float(over.max(initial=0.0))
    items["demand_cap"] = (v3 <= tol * max(1.0, alpha), v3)
    try:
        psi = ci_objective(G, s, list(sol.cut))
        v4 = psi - 2.0 * alpha
        items["cut_ratio"] = (v4 <= tol * max(1.0, alpha), v4)
    except (UndefinedObjectiveError, DomainError):
        items["cut_ratio"] = (False, math.inf)
    v5 = float(np.max(-(dem * s), initial=0.0))
    items["demand_sign"] = (v5 <= tol * max(1.0, alpha), v5)
    return ValidationReport(items)
