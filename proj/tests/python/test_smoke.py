import math

import numpy as np
import pytest

import vclust


@pytest.fixture(scope="module")
def dataset():
    return vclust.generate([3, 3, 3], n=500, seed=7)


def test_generate_shapes(dataset):
    stats = dataset["stats"]
    assert stats.n == 500
    assert stats.p == 9
    assert dataset["truth"] == [0, 0, 0, 1, 1, 1, 2, 2, 2]
    cov = stats.covariance
    assert cov.shape == (9, 9)
    assert np.allclose(cov, cov.T)


def test_sample_stats_from_data():
    rng = np.random.default_rng(0)
    rows = rng.standard_normal((50, 4))
    stats = vclust.SampleStats.from_data(rows)
    assert stats.n == 50
    assert np.allclose(stats.covariance, rows.T @ rows / 50)


def test_invalid_covariance_raises():
    with pytest.raises(ValueError):
        vclust.SampleStats(10, np.array([[1.0, 2.0], [0.0, 1.0]]))


def test_variational_matches_closed_form_at_beta_zero(dataset):
    stats, truth = dataset["stats"], dataset["truth"]
    vi = vclust.variational_log_marginal(stats, truth, beta=0.0)
    exact = vclust.basic_log_marginal(stats, truth)
    assert abs(vi["log_marginal"] - exact) <= 1e-6 * (1 + abs(exact))
    assert vi["map"]["converged"]


def test_map_blocks_are_positive_definite(dataset):
    sol = vclust.solve_map(dataset["stats"], dataset["truth"], beta=0.02)
    assert sol["converged"]
    assert len(sol["x_blocks"]) == 3
    for block in sol["x_blocks"]:
        assert np.all(np.linalg.eigvalsh(block) > 0)


def test_chib_close_to_closed_form_at_beta_zero(dataset):
    stats, truth = dataset["stats"], dataset["truth"]
    est = vclust.chib_log_marginal(stats, truth, beta=0.0, samples=1000, kappa=1.0, seed=3)
    exact = vclust.basic_log_marginal(stats, truth)
    assert abs(est["log_marginal"] - exact) <= 3 * est["std_error"] + 1e-8 * (1 + abs(exact))
    assert len(est["acceptance_rates"]) == 4


def test_select_recovers_truth(dataset):
    stats, truth = dataset["stats"], dataset["truth"]
    candidates = vclust.spectral_candidates(stats, k_max=5, seed=1)
    assert truth in candidates
    result = vclust.select(stats, candidates, "proposed-vi", threads=1)
    assert result["best"] == truth
    assert math.isclose(sum(result["posterior_k"].values()), 1.0, rel_tol=1e-9)
    assert vclust.anmi(result["best"], truth) == pytest.approx(1.0)


def test_linkage_and_baseline_scores(dataset):
    stats, truth = dataset["stats"], dataset["truth"]
    candidates = vclust.linkage_candidates(stats, "average", k_max=5)
    assert len(candidates) == 4
    assert math.isfinite(vclust.score(stats, truth, "ebic:0.5"))
    with pytest.raises(ValueError):
        vclust.linkage_candidates(stats, "complete")


def test_canonicalize_relabels_by_first_appearance():
    assert vclust.canonicalize([5, 5, 2, 9, 2]) == [0, 0, 1, 2, 1]
