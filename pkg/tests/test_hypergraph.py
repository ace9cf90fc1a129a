import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import (SPECS, dual_norm_oracle, f_norm_oracle, lovasz_oracle, path, random_hypergraph,
                     random_spec)
from hprc.errors import DegenerateCutError, DomainError, UnsupportedRankError
from hprc.hypergraph import (STANDARD, CutFunctionSpec, Hypergraph, base_polytope_argmax, dual_f_norm,
                             evaluate_cut_fn, f_norm, graph_lovasz, lovasz_extension, min_shift_f_norm,
                             min_shift_l1, ratio_cut, relaxed_ratio, sweep_cut_round)

STAR = CutFunctionSpec.star()


# cut functions ------------------------------------------------------------------

def test_standard_cut_values():
    h = (0, 1, 2)
    assert evaluate_cut_fn(STANDARD, h, {0}) == 1.0
    assert evaluate_cut_fn(STANDARD, h, set()) == 0.0
    assert evaluate_cut_fn(STANDARD, h, {0, 1, 2}) == 0.0


def test_star_rank4_three_vertices():
    assert evaluate_cut_fn(STAR, (0, 1, 2, 3), {0, 1, 2}) == 1.0


def test_cardinality_power_and_table():
    spec = CutFunctionSpec.cardinality(p=0.5)
    assert evaluate_cut_fn(spec, (0, 1, 2, 3), {0}) == pytest.approx(1.0)
    assert evaluate_cut_fn(spec, (0, 1, 2, 3), {0, 1}) == pytest.approx(np.sqrt(2))
    tab = CutFunctionSpec.cardinality(table=[0, 2, 3, 3.5])
    assert evaluate_cut_fn(tab, (4, 5, 6), {5}) == 2.0


def test_subset_outside_hyperedge_rejected():
    with pytest.raises(DomainError):
        evaluate_cut_fn(STANDARD, (0, 1), {2})


@pytest.mark.parametrize("bad", [dict(p=1.5), dict(p=0.0), dict(table=[0, 1, 3]), dict(table=[0, 2, 1])])
def test_invalid_cardinality_specs(bad):
    with pytest.raises(DomainError):
        CutFunctionSpec.cardinality(**bad)


def test_oracle_kind_matches_builtin():
    spec = CutFunctionSpec.from_oracle(lambda S: float(len(S)) ** 0.5)
    h = (0, 3, 7, 9)
    for size in range(5):
        for S in itertools.combinations(h, size):
            assert evaluate_cut_fn(spec, h, S) == pytest.approx(evaluate_cut_fn(SPECS["card"], h, S))


def test_clique_expands_to_pairs():
    G = Hypergraph(4, [((0, 1, 2, 3), 2.0, CutFunctionSpec.clique())])
    assert G.m == 6 and all(e.rank == 2 for e in G.edges)
    assert G.cut_value([0]) == pytest.approx(6.0)  # |S| |h \ S| w
    assert G.cut_value([0, 1]) == pytest.approx(8.0)


def test_hypergraph_validation():
    with pytest.raises(DomainError):
        Hypergraph(3, [((0, 0), 1)])
    with pytest.raises(DomainError):
        Hypergraph(3, [((0, 5), 1)])
    with pytest.raises(DomainError):
        Hypergraph(3, [((0, 1), -1)])
    with pytest.raises(DomainError):
        Hypergraph(3, [((0, 1), 1)], mu=[1, 0, 1])
    with pytest.raises(DomainError):
        Hypergraph(3, [((0,), 1)])


# Lovasz extension and base polytope ---------------------------------------------

def test_lovasz_standard_example():
    assert lovasz_extension(STANDARD, (0, 1, 2), [0.9, 0.4, 0.1]) == pytest.approx(0.8)


def test_lovasz_star_example():
    assert lovasz_extension(STAR, (0, 1, 2), [1, 1, 0]) == pytest.approx(1.0)


def test_greedy_vertex_example():
    np.testing.assert_allclose(base_polytope_argmax(STANDARD, (0, 1, 2), [0.9, 0.4, 0.1]), [1, 0, -1])


def test_greedy_ties_follow_vertex_ids():
    y = base_polytope_argmax(STANDARD, (2, 5, 8), [1.0, 1.0, 0.0])
    np.testing.assert_allclose(y, [1, 0, -1])


@pytest.mark.parametrize("kind", ["standard", "star", "card", "table"])
def test_lovasz_matches_threshold_integral(rng, kind):
    for _ in range(60):
        r = int(rng.integers(2, 8))
        spec = random_spec(rng, (kind,), r)
        h = tuple(sorted(rng.choice(30, r, replace=False).tolist()))
        x = rng.normal(size=r).round(1)
        assert lovasz_extension(spec, h, x) == pytest.approx(lovasz_oracle(spec, h, x), abs=1e-12)
        y = base_polytope_argmax(spec, h, x)
        assert abs(y.sum()) < 1e-12
        assert float(y @ x) == pytest.approx(lovasz_extension(spec, h, x), abs=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=7), st.floats(-3, 3),
       st.sampled_from(["standard", "star", "card"]))
def test_lovasz_shift_invariant_and_even(x, c, kind):
    spec = SPECS[kind]
    h = tuple(range(len(x)))
    x = np.array(x)
    v = lovasz_extension(spec, h, x)
    assert lovasz_extension(spec, h, x + c) == pytest.approx(v, abs=1e-9)
    assert lovasz_extension(spec, h, -x) == pytest.approx(v, abs=1e-9)
    assert v >= -1e-12


@settings(max_examples=60, deadline=None)
@given(st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=6),
       st.lists(st.floats(-5, 5, allow_nan=False), min_size=2, max_size=6),
       st.sampled_from(["standard", "star", "card"]))
def test_lovasz_subadditive_and_homogeneous(x, y, kind):
    r = min(len(x), len(y))
    spec = SPECS[kind]
    h = tuple(range(r))
    x, y = np.array(x[:r]), np.array(y[:r])
    assert lovasz_extension(spec, h, x + y) <= lovasz_extension(spec, h, x) + lovasz_extension(spec, h, y) + 1e-9
    assert lovasz_extension(spec, h, 2.5 * x) == pytest.approx(2.5 * lovasz_extension(spec, h, x), abs=1e-9)


def test_lovasz_on_indicator_is_cut_value(rng):
    for kind in ("standard", "star", "card"):
        spec = SPECS[kind]
        h = (0, 1, 2, 3, 4)
        for S in itertools.chain.from_iterable(itertools.combinations(h, k) for k in range(6)):
            x = np.isin(h, S).astype(float)
            assert lovasz_extension(spec, h, x) == pytest.approx(evaluate_cut_fn(spec, h, S))


# norms ----------------------------------------------------------------------------

def test_norm_examples():
    assert f_norm(STANDARD, (0, 1), [-2, 1]) == pytest.approx(2.0)
    assert dual_f_norm(STANDARD, (0, 1), [0.5, -0.5]) == pytest.approx(1.0)
    assert f_norm(STAR, (0, 1, 2), [1, -2, 0.5]) == pytest.approx(3.5)
    assert dual_f_norm(STAR, (0, 1, 2), [1, -2, 0.5]) == pytest.approx(2.0)


@pytest.mark.parametrize("kind", ["standard", "star", "card", "table"])
def test_norms_match_oracles(rng, kind):
    for _ in range(40):
        r = int(rng.integers(2, 7))
        spec = random_spec(rng, (kind,), r)
        h = tuple(range(r))
        x = rng.normal(size=r)
        assert f_norm(spec, h, x) == pytest.approx(f_norm_oracle(spec, h, x), abs=1e-12)
        assert dual_f_norm(spec, h, x) == pytest.approx(dual_norm_oracle(spec, h, x), abs=1e-12)


def test_oracle_dual_norm_exhaustive_and_cap():
    spec = CutFunctionSpec.from_oracle(lambda S: min(len(S), 2.0))
    y = np.array([3.0, -1.0, 0.5, 2.0])
    assert dual_f_norm(spec, (0, 1, 2, 3), y) == pytest.approx(dual_norm_oracle(spec, (0, 1, 2, 3), y))
    with pytest.raises(UnsupportedRankError):
        dual_f_norm(spec, tuple(range(21)), np.ones(21))


def test_dual_norm_holder_inequality(rng):
    for kind in ("standard", "star", "card"):
        spec = SPECS[kind]
        for _ in range(50):
            r = int(rng.integers(2, 7))
            h = tuple(range(r))
            x, y = rng.normal(size=r), rng.normal(size=r)
            assert abs(x @ y) <= f_norm(spec, h, x) * dual_f_norm(spec, h, y) + 1e-9


def test_min_shift_f_norm_against_scalar_minimizer(rng):
    from scipy.optimize import minimize_scalar

    for kind in ("standard", "star", "card"):
        spec = SPECS[kind]
        for _ in range(20):
            r = int(rng.integers(2, 7))
            h = tuple(range(r))
            x = rng.normal(size=r)
            val, _ = min_shift_f_norm(spec, h, x)
            ref = minimize_scalar(lambda u: f_norm(spec, h, x - u), bounds=(x.min(), x.max()), method="bounded",
                                  options={"xatol": 1e-12})
            assert val <= ref.fun + 1e-9


def test_weighted_median_minimizes_l1(rng):
    for _ in range(100):
        n = int(rng.integers(1, 9))
        x = rng.normal(size=n).round(1)
        mu = rng.integers(1, 4, n).astype(float)
        val, gamma = min_shift_l1(x, mu)
        grid = np.concatenate([x, np.linspace(x.min() - 1, x.max() + 1, 201)])
        assert val <= min(float(mu @ np.abs(x - g)) for g in grid) + 1e-12
        assert val == pytest.approx(float(mu @ np.abs(x - gamma)))


# ratio cut and sweep -------------------------------------------------------------

def test_ratio_cut_examples():
    assert ratio_cut(path(4), [0, 1]) == pytest.approx(0.5)
    tri = Hypergraph(3, [((0, 1), 1), ((1, 2), 1), ((0, 2), 1)])
    assert ratio_cut(tri, [0]) == pytest.approx(2.0)


def test_ratio_cut_degenerate():
    with pytest.raises(DegenerateCutError):
        ratio_cut(path(3), [])
    with pytest.raises(DegenerateCutError):
        ratio_cut(path(3), [0, 1, 2])


def test_ratio_cut_symmetric(rng):
    G = random_hypergraph(rng, 7, kinds=("standard", "star", "card"), mu_max=3)
    for S in ([0], [1, 2], [0, 3, 5]):
        comp = [v for v in range(7) if v not in S]
        assert ratio_cut(G, S) == pytest.approx(ratio_cut(G, comp))


def test_sweep_path_example():
    res = sweep_cut_round(path(4), [3, 2, 1, 0])
    assert res.cut == (0, 1) and res.psi == pytest.approx(0.5)


def test_sweep_constant_vector():
    with pytest.raises(DegenerateCutError):
        sweep_cut_round(path(3), [1, 1, 1])


def test_sweep_guarantee_and_threshold_sets(rng):
    for _ in range(80):
        n = int(rng.integers(2, 9))
        G = random_hypergraph(rng, n, kinds=("standard", "star", "card"), mu_max=3)
        x = rng.normal(size=n).round(1)
        if np.ptp(x) == 0:
            continue
        res = sweep_cut_round(G, x)
        assert res.psi <= relaxed_ratio(G, x) + 1e-9
        # output is a threshold set and optimal among threshold sets
        S = set(res.cut)
        assert all(x[i] >= x[j] for i in S for j in range(n) if j not in S)
        best = min(ratio_cut(G, np.flatnonzero(x >= t)) for t in np.unique(x)[1:])
        assert res.psi == pytest.approx(best)


def test_sweep_with_oracle_edges(rng):
    spec = CutFunctionSpec.from_oracle(lambda S: float(len(S)) ** 0.5)
    G1 = Hypergraph(5, [((0, 1, 2), 1, spec), ((2, 3, 4), 2, spec), ((0, 4), 1)])
    G2 = Hypergraph(5, [((0, 1, 2), 1, SPECS["card"]), ((2, 3, 4), 2, SPECS["card"]), ((0, 4), 1)])
    x = np.array([0.3, 0.9, -0.2, 0.1, 0.5])
    assert sweep_cut_round(G1, x) == sweep_cut_round(G2, x)
    assert graph_lovasz(G1, x) == pytest.approx(graph_lovasz(G2, x))
