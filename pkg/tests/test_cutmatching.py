import itertools
import math

import numpy as np
import pytest
from scipy.linalg import expm

from helpers import cycle, hypercube, random_hypergraph
from hprc.config import RunConfig
from hprc.cutmatching import (MatrixWeights, approx_rc, best_witness, certificate_quality, check_separation, embed,
                              is_balanced, jl_dimension, matching_action_from_solution, mirror_descent_embedding,
                              num_rounds, round_cut, step_size, verify_matching_action)
from hprc.errors import DegenerateCutError, DegenerateEmbeddingError
from hprc.exhaustive import min_ratio_cut
from hprc.flow import verify_flow_embedding
from hprc.graphs import WeightedGraph
from hprc.hypergraph import Hypergraph
from hprc.improve import seed_from_cut, solve_ci


def test_schedule_constants():
    assert jl_dimension(64, 0.5, 8.0) == math.ceil(8 * math.log(64) / 0.25)
    assert num_rounds(8, 0.1, 0.05, 10_000) == math.ceil(640 * math.log(8) ** 2 / 0.9)
    assert num_rounds(8, 0.1, 0.05, 30) == 30
    T = 30
    assert step_size(8, T, 0.1, 0.05) == pytest.approx(math.sqrt(math.log(8) ** 2 / (2 * 0.05 * T * 0.9)))


def test_initial_density():
    mu = np.ones(5)
    X, Xh = MatrixWeights(mu, 0.5).density()
    P = np.eye(5) - np.ones((5, 5)) / 5
    np.testing.assert_allclose(X, P / 4, atol=1e-12)
    np.testing.assert_allclose(Xh @ Xh, X, atol=1e-12)


def test_density_matches_expm_oracle():
    # unit matchings on K4 played in sequence
    mu = np.array([1.0, 2.0, 1.0, 3.0])
    ms = [WeightedGraph(4, {(0, 1): 1.0, (2, 3): 1.0}), WeightedGraph(4, {(0, 2): 0.5, (1, 3): 1.0}),
          WeightedGraph(4, {(0, 3): 1.0, (1, 2): 0.7})]
    eta = 0.8
    mw = MatrixWeights(mu, eta)
    acc = np.zeros((4, 4))
    u = np.sqrt(mu) / np.linalg.norm(np.sqrt(mu))
    P = np.eye(4) - np.outer(u, u)
    for D in ms:
        mw.update(D)
        acc += D.normalized_laplacian(mu)
        ref = P @ expm(-eta * acc) @ P
        ref /= np.trace(ref)
        X, _ = mw.density()
        np.testing.assert_allclose(X, ref, atol=1e-12)
        assert np.trace(X) == pytest.approx(1.0)
        np.testing.assert_allclose(X @ np.sqrt(mu), 0.0, atol=1e-12)
        ev_ref, ev = np.linalg.eigvalsh(ref), np.linalg.eigvalsh(X)
        np.testing.assert_allclose(ev, ev_ref, atol=1e-12)


def test_embedding_centered_and_normalized(rng):
    mu = rng.integers(1, 4, 12).astype(float)
    G = WeightedGraph(12, {(0, 5): 1.0, (3, 7): 0.5})
    emb = mirror_descent_embedding([G], mu, 0.4, 200, rng)
    np.testing.assert_allclose(mu @ emb.vectors, 0.0, atol=1e-10)
    np.testing.assert_allclose(mu @ emb.full, 0.0, atol=1e-10)
    # full-dimensional: sum mu_i ||v_i||^2 = trace X = 1
    assert float(mu @ np.sum(emb.full ** 2, axis=1)) == pytest.approx(1.0)
    assert float(mu @ np.sum(emb.vectors ** 2, axis=1)) == pytest.approx(1.0, rel=0.25)


def test_isotropic_start_total_length(rng):
    n = 16
    X, Xh = MatrixWeights(np.ones(n), 1.0).density()
    emb = embed(Xh, np.ones(n), 400, rng)
    assert float(np.sum(emb.vectors ** 2)) == pytest.approx(1.0, rel=0.15)


def test_balanced_example():
    a = 0.7
    V = np.array([[a, 0], [a, 0], [-a, 0], [-a, 0]])
    assert is_balanced(V, np.ones(4))


def test_outlier_not_balanced():
    V = np.zeros((10, 2))
    V[0] = [9.0, 0.0]
    V[1:] = [-1.0, 0.0]
    assert not is_balanced(V, np.ones(10))


def test_balanced_zero_variance():
    with pytest.raises(DegenerateEmbeddingError):
        is_balanced(np.ones((4, 2)), np.ones(4))


def test_round_cut_antipodal_clusters(rng):
    V = np.array([[1.0, 0.0]] * 3 + [[-1.0, 0.0]] * 3)
    res = round_cut(V, np.ones(6), rng)
    assert set(res.S) in ({0, 1, 2}, {3, 4, 5})
    assert res.branch == "balanced"
    assert check_separation(V, np.ones(6), res.S, res.T, res.sigma)


def test_round_cut_outlier_unbalanced(rng):
    V = np.zeros((10, 2))
    V[0] = [9.0, 0.0]
    V[1:] = [-1.0, 0.0]
    res = round_cut(V, np.ones(10), rng)
    assert res.S == (0,) and res.branch == "unbalanced"
    assert check_separation(V, np.ones(10), res.S, res.T, res.sigma)


def test_round_cut_heavy_vertex(rng):
    V = np.array([[1.0], [-1.0], [0.5]])
    mu = np.array([10.0, 1.0, 1.0])
    res = round_cut(V, mu, rng)
    assert 0 not in res.S
    assert check_separation(V, mu, res.S, res.T, res.sigma)


def test_round_cut_random_embeddings_have_witnesses(rng):
    for _ in range(300):
        n = int(rng.integers(2, 12))
        d = int(rng.integers(1, 6))
        mu = rng.integers(1, 4, n).astype(float)
        V = rng.normal(size=(n, d)) * rng.exponential(size=(n, 1))
        V -= (mu @ V) / mu.sum()
        if np.allclose(V, 0):
            continue
        res = round_cut(V, mu, rng)
        assert check_separation(V, mu, res.S, res.T, res.sigma)
        assert mu[list(res.S)].sum() <= mu.sum() / 2


def test_best_witness_is_optimal(rng):
    for _ in range(40):
        n = int(rng.integers(3, 8))
        mu = rng.integers(1, 3, n).astype(float)
        V = rng.normal(size=(n, 2))
        S = np.zeros(n, dtype=bool)
        S[0] = True
        T, sigma = best_witness(V, mu, S)
        assert check_separation(V, mu, [0], np.flatnonzero(T), sigma)
        best = 0.0
        others = list(range(1, n))
        for k in range(1, n):
            for Tc in itertools.combinations(others, k):
                if mu[list(Tc)].sum() >= mu.sum() / 3:
                    best = max(best, mu[0] * min(np.sum((V[0] - V[j]) ** 2) for j in Tc))
        assert sigma == pytest.approx(best)


def test_check_separation_rejects_bad_witness():
    V = np.array([[0.0], [1.0], [2.0], [3.0]])
    mu = np.ones(4)
    assert check_separation(V, mu, [0], [2, 3], 4.0)
    assert not check_separation(V, mu, [0], [2, 3], 4.5)
    assert not check_separation(V, mu, [0], [3], 1.0)  # T too light
    assert not check_separation(V, mu, [0, 1, 2], [3], 1.0)  # S too heavy
    assert not check_separation(V, mu, [0], [0, 3], 1.0)  # overlap


def test_matching_action_empty_graph():
    D = WeightedGraph(4)
    assert not verify_matching_action(D, [0, 1], np.ones(4), 0.5).passed
    assert verify_matching_action(D, [0, 1], np.ones(4), 1.0).passed


def test_matching_action_perfect_and_invalid():
    mu = np.ones(4)
    D = WeightedGraph(4, {(0, 2): 1.0, (1, 3): 1.0})
    assert verify_matching_action(D, [0, 1], mu, 0.01).passed
    assert not verify_matching_action(WeightedGraph(4, {(0, 1): 1.0, (2, 3): 1.0}), [0, 1], mu, 1.0).bipartite
    assert not verify_matching_action(D.scaled(1.5), [0, 1], mu, 1.0).passed


def test_matching_action_from_solution(rng):
    for _ in range(40):
        n = int(rng.integers(2, 10))
        G = random_hypergraph(rng, n, mu_max=3)
        mu = G.mu
        S = rng.choice(n, int(rng.integers(1, n)), replace=False)
        s = seed_from_cut(G, S)
        S = np.flatnonzero(s > 0)
        sol = solve_ci(G, s, 0.1)
        D, H = matching_action_from_solution(G, sol)
        assert verify_matching_action(D, S, mu, 0.1).passed
        Lmu = D.normalized_laplacian(mu)
        ev = np.linalg.eigvalsh(Lmu)
        assert ev.min() >= -1e-9 and ev.max() <= 2 + 1e-9


def test_certificate_quality_k4():
    K4 = WeightedGraph(4, {(i, j): 1.0 for i in range(4) for j in range(i + 1, 4)})
    lam, bound = certificate_quality(K4, np.ones(4))
    assert lam == pytest.approx(4.0) and bound == pytest.approx(2.0)


def test_spectral_bound_below_graph_ratio(rng):
    from hprc.exhaustive import min_graph_ratio_cut

    for _ in range(30):
        n = int(rng.integers(2, 9))
        mu = rng.integers(1, 4, n).astype(float)
        H = WeightedGraph(n)
        for _ in range(2 * n):
            i, j = rng.choice(n, 2, replace=False)
            H.add_edge(int(i), int(j), float(rng.random()))
        _, bound = certificate_quality(H, mu)
        assert bound <= min_graph_ratio_cut(n, H.edges, mu)[0] + 1e-9


def test_approx_rc_disconnected():
    G = Hypergraph(5, [((0, 1), 1), ((2, 3, 4), 1)])
    res = approx_rc(G, RunConfig())
    assert res.psi == 0.0 and set(res.cut) in ({0, 1}, {2, 3, 4})


def test_approx_rc_single_vertex():
    with pytest.raises(DegenerateCutError):
        approx_rc(Hypergraph(1, []))


def test_approx_rc_deterministic():
    G = cycle(9)
    a = approx_rc(G, RunConfig(rng_seed=77, max_rounds=12))
    b = approx_rc(G, RunConfig(rng_seed=77, max_rounds=12))
    assert a.cut == b.cut and a.psi == b.psi
    assert a.certificate.H.edges == b.certificate.H.edges
    assert a.certificate.rho == b.certificate.rho


def test_approx_rc_round_properties(rng):
    for trial in range(6):
        G = random_hypergraph(rng, int(rng.integers(4, 11)), mu_max=2)
        cfg = RunConfig(rng_seed=trial, max_rounds=24)
        res = approx_rc(G, cfg)
        cert = res.certificate
        T = len(cert.rounds)
        n = G.n
        for r in cert.rounds:
            assert r.matching.passed
            V = r.embedding
            assert check_separation(V, G.mu, r.S, best_witness(V, G.mu, G.mask(r.S))[0].nonzero()[0], r.sigma)
            # separation carried by the matching edges
            assert r.separation >= r.sigma * (1 / 3 - 4 * cfg.eps) - 1e-9
            ev = np.linalg.eigvalsh(r.D.normalized_laplacian(G.mu))
            assert ev.min() >= -1e-9 and ev.max() <= 2 + 1e-9
        # regret bound of the matrix multiplicative weights
        lam = np.linalg.eigvalsh(cert.H.scaled(1 / T).normalized_laplacian(G.mu))[1]
        gains = sum(r.gain for r in cert.rounds)
        eta = cert.eta
        assert lam >= (1 - 2 * eta) / T * gains - math.log(n) / (T * eta) - 1e-9
        assert cert.rho == pytest.approx(sum(2 / r.alpha for r in cert.rounds))
        assert cert.rho_tight <= cert.rho + 1e-9
        rep = verify_flow_embedding(G, cert.H, cert.rho)
        assert rep.valid
        rep_tight = verify_flow_embedding(G, cert.H, cert.rho_tight)
        assert rep_tight.valid
        opt, _ = min_ratio_cut(G)
        assert cert.lower_bound <= opt + 1e-9 <= res.psi + 2e-9


def test_approx_rc_general_cut_functions(rng):
    G = random_hypergraph(rng, 7, kinds=("star", "card"))
    res = approx_rc(G, RunConfig(rng_seed=1, max_rounds=10))
    assert all(r.matching.passed for r in res.certificate.rounds)
    assert verify_flow_embedding(G, res.certificate.H, res.certificate.rho).valid


def test_approx_rc_hypercube_quality():
    G = hypercube(3)
    res = approx_rc(G, RunConfig(rng_seed=5))
    assert res.psi <= 10 * math.log2(8) * 1.0
    assert math.isfinite(res.certified_ratio)
