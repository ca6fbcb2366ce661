"""Mismatch metric, end-to-end pipelines, and community counting."""

import numpy as np
import pytest

import hypersbm as hs
from hypersbm.errors import DegenerateDegreeError
from hypersbm.model import Hypergraph, make_hypergraph
from hypersbm.pipeline import mismatch_ratio_bruteforce


def two_clique_instance():
    edges = []
    for base in (0, 4):
        for i in range(4):
            for j in range(i + 1, 4):
                edges.append([base + i, base + j])
    return make_hypergraph(8, {2: edges}), np.array([0] * 4 + [1] * 4)


def planted_instance(n, a, b, seed):
    coeffs = hs.two_level_coefficients(2, {2: float(a)}, {2: float(b)})
    T = hs.ProbabilityTensors.from_unscaled(2, coeffs, n)
    z = hs.sample_membership(n, [0.5, 0.5], seed=[seed, 11])
    h = hs.sample_hypergraph(n, z, T, seed=[seed, 12])
    return h, z, T


# ---------------------------------------------------------------------------
# Mismatch ratio
# ---------------------------------------------------------------------------

def test_mismatch_identity_and_relabeling():
    z = np.array([0, 0, 1, 1])
    assert hs.mismatch_ratio(z, z)[0] == 0.0
    assert hs.mismatch_ratio(z, 1 - z)[0] == 0.0


def test_mismatch_half():
    eta, _ = hs.mismatch_ratio(np.array([0, 0, 1, 1]), np.array([0, 1, 0, 1]))
    assert eta == 0.5


def test_mismatch_rejects_length_mismatch():
    with pytest.raises(ValueError):
        hs.mismatch_ratio(np.array([0, 1]), np.array([0, 1, 1]))


def test_mismatch_equals_bruteforce():
    rng = np.random.default_rng(12)
    for _ in range(100):
        k = int(rng.integers(2, 5))
        n = int(rng.integers(4, 51))
        z = rng.integers(0, k, size=n)
        zh = rng.integers(0, k, size=n)
        eta, _ = hs.mismatch_ratio(z, zh, k=k)
        assert np.isclose(eta, mismatch_ratio_bruteforce(z, zh, k))


def test_mismatch_invariant_under_consistent_relabeling():
    rng = np.random.default_rng(13)
    for _ in range(30):
        k = int(rng.integers(2, 5))
        z = rng.integers(0, k, size=40)
        zh = rng.integers(0, k, size=40)
        perm = rng.permutation(k)
        base, _ = hs.mismatch_ratio(z, zh, k=k)
        assert np.isclose(base, hs.mismatch_ratio(perm[z], zh, k=k)[0])
        assert np.isclose(base, hs.mismatch_ratio(z, perm[zh], k=k)[0])


def test_mismatch_never_exceeds_matching_bound():
    rng = np.random.default_rng(14)
    for _ in range(50):
        k = int(rng.integers(2, 5))
        z = rng.integers(0, k, size=60)
        zh = rng.integers(0, k, size=60)
        eta, _ = hs.mismatch_ratio(z, zh, k=k)
        assert eta <= 1.0 - 1.0 / k + 1e-12


def test_mismatch_permutation_is_reported():
    z = np.array([0, 0, 1, 1])
    eta, perm = hs.mismatch_ratio(z, 1 - z)
    assert eta == 0.0 and perm.tolist() == [1, 0]


# ---------------------------------------------------------------------------
# Agnostic pipeline
# ---------------------------------------------------------------------------

def test_agnostic_on_disconnected_cliques():
    h, truth = two_clique_instance()
    report = hs.agnostic_partition(h, 2, seed=0, truth=truth)
    assert report.eta == 0.0
    assert report.kept == 8
    assert report.iterations >= 1


def test_agnostic_single_community():
    h, _ = two_clique_instance()
    report = hs.agnostic_partition(h, 1, seed=0, truth=np.zeros(8, dtype=int))
    assert report.eta == 0.0
    assert np.all(report.labels == 0)


def test_agnostic_deterministic():
    h, z, _ = planted_instance(150, 12, 2, 5)
    r1 = hs.agnostic_partition(h, 2, seed=9, truth=z)
    r2 = hs.agnostic_partition(h, 2, seed=9, truth=z)
    assert np.array_equal(r1.labels, r2.labels)
    assert r1.eta == r2.eta and r1.iterations == r2.iterations


def test_agnostic_recovers_mixed_order_model():
    # divergence ~2 with within/cross ratio capped at 4, graph + triple layers
    n = 500
    cf = {2: hs.two_level_coefficients(2, {2: 6.0}, {2: 2.0})[2],
          3: hs.two_level_coefficients(2, {3: 23.4}, {3: 5.85})[3]}
    T = hs.ProbabilityTensors.from_unscaled(2, cf, n)
    assert 1.9 <= hs.chernoff_hellinger([0.5, 0.5], cf, n).value <= 2.1
    assert hs.probability_ratio_bound(T) <= 4.0
    wins = 0
    for t in range(20):
        z = hs.sample_membership(n, [0.5, 0.5], seed=[7700 + t, 11])
        h = hs.sample_hypergraph(n, z, T, seed=[7700 + t, 12])
        wins += hs.agnostic_partition(h, 2, seed=7700 + t, truth=z).eta == 0.0
    assert wins >= 16


def test_agnostic_without_truth_leaves_eta_unset():
    h, _, _ = planted_instance(100, 12, 2, 6)
    report = hs.agnostic_partition(h, 2, seed=1)
    assert report.eta is None and report.eta_stage1 is None
    assert report.labels.shape == (100,)


def test_agnostic_degenerate_degree_propagates():
    h = Hypergraph(30, {2: np.empty((0, 2), dtype=np.int64)})
    with pytest.raises(DegenerateDegreeError):
        hs.agnostic_partition(h, 2, seed=0)


# ---------------------------------------------------------------------------
# Known-parameter pipeline
# ---------------------------------------------------------------------------

def test_prior_pipeline_small_n_guard():
    h, z, T = planted_instance(100, 14, 2, 0)
    small = Hypergraph(10, {2: np.array([[0, 1], [2, 3]])})
    with pytest.raises(ValueError):
        hs.partition_with_prior(small, 2, T, [0.5, 0.5], seed=0)


def test_prior_pipeline_deterministic():
    h, z, T = planted_instance(200, 16, 2, 3)
    r1 = hs.partition_with_prior(h, 2, T, [0.5, 0.5], seed=4, truth=z)
    r2 = hs.partition_with_prior(h, 2, T, [0.5, 0.5], seed=4, truth=z)
    assert np.array_equal(r1.labels, r2.labels)
    assert r1.eta == r2.eta


def test_prior_pipeline_recovers_planted():
    wins = 0
    for t in range(5):
        h, z, T = planted_instance(300, 18, 2, 40 + t)
        report = hs.partition_with_prior(h, 2, T, [0.5, 0.5], seed=40 + t, truth=z)
        wins += report.eta == 0.0
    assert wins >= 4


def test_prior_pipeline_split_adjust_flag_runs():
    h, z, T = planted_instance(200, 16, 2, 8)
    report = hs.partition_with_prior(h, 2, T, [0.5, 0.5], seed=8, truth=z,
                                     split_adjust=False)
    assert report.labels.shape == (200,)


# ---------------------------------------------------------------------------
# Number of communities
# ---------------------------------------------------------------------------

def test_count_single_dense_community():
    coeffs = {2: np.array([40.0])}
    T = hs.ProbabilityTensors.from_unscaled(1, coeffs, 300)
    hits = 0
    for t in range(10):
        h = hs.sample_hypergraph(300, np.zeros(300, dtype=int), T, seed=t)
        hits += hs.estimate_num_communities(h).k_hat == 1
    assert hits >= 9


def test_count_rejects_empty_hypergraph():
    h = Hypergraph(20, {2: np.empty((0, 2), dtype=np.int64)})
    with pytest.raises(DegenerateDegreeError):
        hs.estimate_num_communities(h)


def test_count_reports_spectrum_and_threshold():
    h, z, _ = planted_instance(200, 30, 5, 2)
    est = hs.estimate_num_communities(h)
    assert est.k_hat == 2
    assert est.eigenvalues[0] > est.eigenvalues[1] > est.threshold
    assert est.gap > 1.0


def test_count_full_spectrum_mode():
    h, _, _ = planted_instance(150, 24, 4, 11)
    est = hs.estimate_num_communities(h, full_spectrum=True)
    assert len(est.eigenvalues) == 150
    assert est.k_hat == 2


def test_count_widened_search():
    h, _, _ = planted_instance(300, 24, 4, 12)
    est = hs.estimate_num_communities(h, num_eigenvalues=20)
    assert len(est.eigenvalues) == 20
    assert est.k_hat == 2
