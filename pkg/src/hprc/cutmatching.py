"""Cut-matching game for ratio cut on submodular hypergraphs.

Each round the cut player embeds the vertices with a matrix-multiplicative-
weights density, rounds the embedding to a cut S, and the matching player
answers with a flow-certified demand graph D between S and its complement.
The union of the D's embeds into G with congestion rho and expands, which
lower-bounds the optimal ratio cut.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import RunConfig
from .errors import DegenerateCutError, DegenerateEmbeddingError
from .flow import HypergraphFlow, congestion, flow_path_decompose
from .graphs import WeightedGraph, lambda2
from .hypergraph import Hypergraph, ratio_cut
from .improve import CISolution, seed_from_cut, solve_ci

BALANCE_T = 3.0
BALANCE_B = 0.1
SEPARATION_C = 1.0 / 3.0


def jl_dimension(n: int, delta: float, c: float = 8.0) -> int:
    return max(1, math.ceil(c * math.log(max(n, 2)) / delta ** 2))


def num_rounds(n: int, eps: float, c_const: float, max_rounds: int) -> int:
    full = math.ceil(32.0 / c_const * math.log(max(n, 2)) ** 2 / (1.0 - eps))
    return max(1, min(full, max_rounds))


def step_size(n: int, rounds: int, eps: float, c_const: float) -> float:
    return math.sqrt(math.log(max(n, 2)) ** 2 / (2.0 * c_const * rounds * (1.0 - eps)))


class MatrixWeights:
    """Density X = P exp(-eta sum_k L_mu(D_k)) P / trace on the complement of sqrt(mu)."""

    def __init__(self, mu, eta: float):
        self.mu = np.asarray(mu, dtype=float)
        self.eta = float(eta)
        n = len(self.mu)
        self.loss = np.zeros((n, n))
        u = np.sqrt(self.mu)
        u /= np.linalg.norm(u)
        self.proj = np.eye(n) - np.outer(u, u)

    def update(self, D: WeightedGraph):
        self.loss += D.normalized_laplacian(self.mu)

    def density(self) -> tuple[np.ndarray, np.ndarray]:
        """(X, X^{1/2})."""
        lam, Q = np.linalg.eigh(self.loss)
        lam = lam - lam.min()  # shift for stability; cancels in the normalization
        Eh = (Q * np.exp(-0.5 * self.eta * lam)) @ Q.T
        Eh = self.proj @ Eh @ self.proj
        X = Eh @ Eh
        tr = float(np.trace(X))
        return X / tr, Eh / math.sqrt(tr)


@dataclass
class Embedding:
    vectors: np.ndarray  # post-JL, mu-rescaled (n x d)
    full: np.ndarray  # pre-JL, mu-rescaled (n x n)
    X: np.ndarray


def embed(Xh: np.ndarray, mu, d: int, rng) -> Embedding:
    """Project the rows of X^{1/2} on d random unit directions and divide by sqrt(mu)."""
    n = Xh.shape[0]
    U = rng.standard_normal((d, n))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    tilde = math.sqrt(n / d) * (Xh @ U.T)
    r = 1.0 / np.sqrt(np.asarray(mu, dtype=float))
    return Embedding(tilde * r[:, None], Xh * r[:, None], Xh @ Xh)


def mirror_descent_embedding(graphs, mu, eta: float, d: int, rng) -> Embedding:
    mw = MatrixWeights(mu, eta)
    for D in graphs:
        mw.update(D)
    X, Xh = mw.density()
    emb = embed(Xh, mu, d, rng)
    emb.X = X
    return emb


# rounding ----------------------------------------------------------------------

def mu_moments(V: np.ndarray, mu) -> tuple[float, float]:
    """(E_mu ||v||^2, Var_mu(v))."""
    mu = np.asarray(mu, dtype=float)
    vol = float(mu.sum())
    sq = np.einsum("ij,ij->i", V, V)
    mean = (mu @ V) / vol
    return float(mu @ sq) / vol, float(mu @ sq) / vol - float(mean @ mean)


def balance_terms(V: np.ndarray, mu, t: float = BALANCE_T) -> tuple[float, float]:
    """(pair term over R_t, Var_mu) for the (t, b)-balance test."""
    mu = np.asarray(mu, dtype=float)
    vol = float(mu.sum())
    E, var = mu_moments(V, mu)
    sq = np.einsum("ij,ij->i", V, V)
    R = sq <= t * E * (1.0 + 1e-12)
    muR = float(mu[R].sum())
    s1 = float(mu[R] @ sq[R])
    c = mu[R] @ V[R]
    pairs = muR * s1 - float(c @ c)  # sum over unordered pairs of mu_i mu_j ||v_i - v_j||^2
    return pairs / vol ** 2, var


def is_balanced(V: np.ndarray, mu, t: float = BALANCE_T, b: float = BALANCE_B) -> bool:
    pair, var = balance_terms(np.asarray(V, dtype=float), mu, t)
    if var <= 0.0:
        raise DegenerateEmbeddingError("embedding has zero variance")
    return pair >= b * var


@dataclass(frozen=True)
class RoundCutResult:
    S: tuple
    T: tuple
    sigma: float
    branch: str


def best_witness(V: np.ndarray, mu, in_S: np.ndarray) -> tuple[np.ndarray, float]:
    """Largest sigma and a T outside S with mu(T) >= mu(V)/3 and
    ||v_i - v_j||^2 >= sigma / mu(S) for all i in S, j in T."""
    mu = np.asarray(mu, dtype=float)
    vol = float(mu.sum())
    out = np.flatnonzero(~in_S)
    VS = V[in_S]
    diff = V[out][:, None, :] - VS[None, :, :]
    dmin = np.einsum("abk,abk->ab", diff, diff).min(axis=1)
    order = np.lexsort((out, -dmin))
    cum = np.cumsum(mu[out][order])
    k = int(np.searchsorted(cum, SEPARATION_C * vol * (1.0 - 1e-12)))
    T = np.zeros(len(mu), dtype=bool)
    T[out[order[: k + 1]]] = True
    return T, float(mu[in_S].sum()) * float(dmin[order[k]])


def check_separation(V: np.ndarray, mu, S, T, sigma: float, rtol: float = 1e-9) -> bool:
    """Verify a robust-separation witness (S, T, sigma) verbatim."""
    mu = np.asarray(mu, dtype=float)
    V = np.asarray(V, dtype=float)
    vol = float(mu.sum())
    S, T = np.asarray(S, dtype=np.int64), np.asarray(T, dtype=np.int64)
    if S.size == 0 or T.size == 0 or not sigma > 0:
        return False
    if set(S.tolist()) & set(T.tolist()):
        return False
    muS = float(mu[S].sum())
    if muS > vol / 2.0 * (1.0 + 1e-12) or float(mu[T].sum()) < SEPARATION_C * vol * (1.0 - 1e-12):
        return False
    diff = V[S][:, None, :] - V[T][None, :, :]
    d2 = np.einsum("abk,abk->ab", diff, diff)
    return bool(d2.min() >= sigma / muS * (1.0 - rtol))


def _finish(V, mu, in_S, branch):
    T, sigma = best_witness(V, mu, in_S)
    return RoundCutResult(tuple(int(i) for i in np.flatnonzero(in_S)), tuple(int(i) for i in np.flatnonzero(T)),
                          sigma, branch)


def round_cut(V: np.ndarray, mu, rng, r_const: float = 0.01, K: int | None = None) -> RoundCutResult:
    """Round a centered embedding to a cut S with mu(S) <= mu(V)/2 and a separation witness."""
    V = np.asarray(V, dtype=float)
    mu = np.asarray(mu, dtype=float)
    n, d = V.shape
    vol = float(mu.sum())
    if n < 2:
        raise DegenerateEmbeddingError("need two vertices")
    W = V - (mu @ V) / vol
    _, var = mu_moments(W, mu)
    if not var > 0.0:
        raise DegenerateEmbeddingError("embedding has zero variance")
    W = W / math.sqrt(var * vol)  # now Var_mu = 1 / mu(V)
    var = 1.0 / vol
    if K is None:
        K = max(1, math.ceil(4.0 * math.log(max(n, 2))))
    if is_balanced(W, mu):
        ids = np.arange(n)
        for _ in range(K):
            g = rng.standard_normal(d)
            g /= np.linalg.norm(g)
            r = math.sqrt(d) * (W @ g)
            order = np.lexsort((ids, -r))
            cum = np.cumsum(mu[order])
            a = int(np.searchsorted(cum, vol / 3.0 * (1.0 - 1e-12)))
            suffix = vol - np.concatenate([[0.0], cum[:-1]])
            b = int(np.flatnonzero(suffix >= vol / 3.0 * (1.0 - 1e-12))[-1])
            if a >= b or (r[order[a]] - r[order[b]]) ** 2 < r_const * var:
                continue
            # grow the lighter side while the gap to the other side survives
            gap = r_const * var
            in_S = np.zeros(n, dtype=bool)
            if cum[a] <= vol / 2.0:
                k = a
                while k + 1 < b and cum[k + 1] <= vol / 2.0 and (r[order[k + 1]] - r[order[b]]) ** 2 >= gap:
                    k += 1
                in_S[order[: k + 1]] = True
            else:
                k = b
                while k - 1 > a and suffix[k - 1] <= vol / 2.0 and (r[order[a]] - r[order[k - 1]]) ** 2 >= gap:
                    k -= 1
                in_S[order[k:]] = True
            res = _finish(V, mu, in_S, "balanced")
            if res.sigma > 0.0:
                return res
    # unbalanced branch: peel off the long vectors
    sq = np.einsum("ij,ij->i", W, W)
    E = 1.0 / vol
    inner = float(np.sqrt(sq[sq <= 1.5 * E * (1.0 + 1e-12)].max(initial=0.0)))
    order = np.lexsort((np.arange(n), -sq))
    best, best_k = -1.0, 0
    muS = 0.0
    for k in range(n - 1):
        v = order[k]
        if sq[v] <= BALANCE_T * E:
            break
        muS += mu[v]
        if muS > vol / 2.0:
            break
        if sq[order[k + 1]] == sq[v]:
            continue
        proxy = (math.sqrt(sq[v]) - inner) ** 2 * muS
        if proxy > best:
            best, best_k = proxy, k + 1
    if best_k:
        in_S = np.zeros(n, dtype=bool)
        in_S[order[:best_k]] = True
        res = _finish(V, mu, in_S, "unbalanced")
        if res.sigma > 0.0:
            return res
    # fallback: best single vertex
    cand = []
    for v in range(n):
        if mu[v] <= vol / 2.0:
            in_S = np.zeros(n, dtype=bool)
            in_S[v] = True
            cand.append(_finish(V, mu, in_S, "singleton"))
    cand = [c for c in cand if c.sigma > 0.0]
    if not cand:
        raise DegenerateEmbeddingError("no separated cut in embedding")
    return max(cand, key=lambda c: (c.sigma, -c.S[0]))


# matching player ---------------------------------------------------------------

@dataclass
class MatchingReport:
    passed: bool
    l1_gap: float
    l1_budget: float
    cap_violation: float
    bipartite: bool


def verify_matching_action(D: WeightedGraph, S, mu, eps: float, tol: float = 1e-9) -> MatchingReport:
    """D must be bipartite over (S, S^c) with degrees close to mu * |s| and never above it."""
    mu = np.asarray(mu, dtype=float)
    in_S = np.zeros(len(mu), dtype=bool)
    in_S[list(S)] = True
    muS, muC = float(mu[in_S].sum()), float(mu[~in_S].sum())
    target = np.where(in_S, mu, mu * muS / muC)
    deg = D.degrees()
    gap = float(np.abs(deg - target).sum())
    budget = eps * float(target.sum())
    cap = float(np.max(deg - target, initial=0.0))
    bip = all(in_S[i] != in_S[j] for i, j in D.edges)
    scale = max(1.0, float(target.sum()))
    ok = bip and gap <= budget + tol * scale and cap <= tol * scale
    return MatchingReport(ok, gap, budget, cap, bip)


def matching_action_from_solution(G: Hypergraph, sol: CISolution):
    """D = H / alpha where H is the path decomposition of the certified flow."""
    H = flow_path_decompose(G, sol.Y)
    return H.scaled(1.0 / sol.alpha), H


def certificate_quality(H: WeightedGraph, mu) -> tuple[float, float]:
    """(lambda_2 of M^{-1/2} L(H) M^{-1/2}, implied lower bound lambda_2 / 2 on Psi*_H)."""
    lam = lambda2(H.normalized_laplacian(mu))
    return lam, lam / 2.0


# driver ------------------------------------------------------------------------

@dataclass
class RoundRecord:
    S: tuple
    T: tuple
    sigma: float
    branch: str
    alpha: float
    cut: tuple
    psi_s: float
    gain: float
    matching: MatchingReport
    separation: float  # sum over D-edges of w ||v_i - v_j||^2
    D: WeightedGraph = field(repr=False, default=None)
    embedding: np.ndarray = field(repr=False, default=None)


@dataclass
class Certificate:
    H: WeightedGraph
    rho: float
    rho_tight: float
    lambda2: float
    spectral_bound: float  # lambda_2 / 2 <= Psi*_H
    lower_bound: float  # spectral_bound / rho <= Psi*_G
    eta: float
    rounds: list


@dataclass
class RatioCutResult:
    cut: tuple
    psi: float
    psi_s: float
    certificate: Certificate
    config: RunConfig

    @property
    def certified_ratio(self) -> float:
        lb = self.certificate.lower_bound
        return self.psi / lb if lb > 0 else math.inf


def approx_rc(G: Hypergraph, cfg: RunConfig | None = None) -> RatioCutResult:
    """Approximate minimum ratio cut with a lower-bound certificate."""
    cfg = RunConfig() if cfg is None else cfg
    n = G.n
    if n < 2:
        raise DegenerateCutError("a single vertex has no cut")
    comps = G.components()
    if len(comps) > 1:
        cut = tuple(comps[0])
        cert = Certificate(WeightedGraph(n), 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, [])
        return RatioCutResult(cut, 0.0, 0.0, cert, cfg)
    mu = G.mu
    T = num_rounds(n, cfg.eps, cfg.c_const, cfg.max_rounds)
    eta = step_size(n, T, cfg.eps, cfg.c_const)
    d = jl_dimension(n, cfg.jl_delta, cfg.jl_c)
    streams = np.random.SeedSequence(cfg.rng_seed).spawn(T)
    mw = MatrixWeights(mu, eta)
    H = WeightedGraph(n)
    absflow = [np.zeros(e.rank) for e in G.edges]
    rho = 0.0
    records = []
    best = None
    for t in range(T):
        rng = np.random.default_rng(streams[t])
        X, Xh = mw.density()
        emb = embed(Xh, mu, d, rng)
        rc = round_cut(emb.vectors, mu, rng, cfg.r_const)
        s = seed_from_cut(G, rc.S)
        sol = solve_ci(G, s, cfg.eps)
        if best is None or sol.psi_s < best[1]:
            best = (sol.cut, sol.psi_s)
        if sol.alpha <= 0.0:
            break
        D, _ = matching_action_from_solution(G, sol)
        Lmu = D.normalized_laplacian(mu)
        gain = float(np.sum(Lmu * X))
        rep = verify_matching_action(D, rc.S, mu, cfg.eps)
        sep = float(sum(w * np.sum((emb.vectors[i] - emb.vectors[j]) ** 2) for (i, j), w in D.edges.items()))
        records.append(RoundRecord(rc.S, rc.T, rc.sigma, rc.branch, sol.alpha, sol.cut, sol.psi_s, gain, rep, sep,
                                   D, emb.vectors))
        mw.update(D)
        H = H.merged(D)
        for k in range(G.m):
            absflow[k] += np.abs(sol.Y.y[k]) / sol.alpha
        rho += 2.0 / sol.alpha
    lam, spec_bound = certificate_quality(H, mu)
    rho_tight = congestion(G, HypergraphFlow(absflow))
    lb = spec_bound / rho if rho > 0 else 0.0
    cert = Certificate(H, rho, rho_tight, lam, spec_bound, lb, eta, records)
    cut, psi_s = best
    return RatioCutResult(tuple(cut), ratio_cut(G, list(cut)), psi_s, cert, cfg)
