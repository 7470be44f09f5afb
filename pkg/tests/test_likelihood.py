import numpy as np
import pytest

from corrvote.core import UsageError
from corrvote.likelihood import (
    DegenerateWeightsError,
    WeightVector,
    empirical_covariance,
    ga_rule,
    ml_estimate,
    ml_rule,
    uniform_fallback,
    weights_from_covariance,
)
from corrvote.noise import NoiseParams, reference_embedding, sample_scores
from corrvote.preprocessing import standardize_rows
from corrvote.rules import range_voting

from helpers import random_scores

REF_PARAMS = NoiseParams(0.1, 1.0)


class TestWeightsFromCovariance:
    def test_identity_gives_uniform_weights(self):
        w = weights_from_covariance(np.eye(5))
        assert w.weights == pytest.approx(np.ones(5), abs=1e-12)
        assert w.total == pytest.approx(5.0)

    def test_fully_correlated_groups_share_weight(self):
        # groups of sizes (2, 1), no distinct noise: per-agent weight is the
        # inverse of its group size
        e = np.array([[1.0, 0.0], [1.0, 0.0], [0.0, 1.0]])
        sigma = e @ e.T
        w = weights_from_covariance(sigma)
        assert w.weights == pytest.approx(np.array([0.5, 0.5, 1.0]), abs=1e-9)

    def test_block_weights_many_partitions(self):
        for sizes in ([3, 2, 1], [4, 4], [1, 1, 1, 5]):
            n = sum(sizes)
            blocks = [np.ones((s, s)) for s in sizes]
            sigma = np.zeros((n, n))
            at = 0
            expected = np.empty(n)
            for s, b in zip(sizes, blocks):
                sigma[at : at + s, at : at + s] = b
                expected[at : at + s] = 1.0 / s
                at += s
            w = weights_from_covariance(sigma)
            assert w.weights == pytest.approx(expected, abs=1e-9)

    def test_sampled_near_singular_covariance_has_negative_weights(self):
        # m close to n: the estimated correlation matrix is ill conditioned
        # and its pseudo-inverse pushes some weights negative
        _, scores = sample_scores(
            reference_embedding(20, 4), REF_PARAMS, 24, np.random.default_rng(3)
        )
        sigma_hat = empirical_covariance(scores)
        w = weights_from_covariance(sigma_hat)
        assert (w.weights < 0).any()

    def test_asymmetric_rejected(self):
        with pytest.raises(UsageError):
            weights_from_covariance(np.array([[1.0, 0.5], [0.0, 1.0]]))


class TestMlEstimate:
    def test_plain_average(self):
        w = WeightVector(weights=np.array([1.0, 1.0]), total=2.0)
        est = ml_estimate(np.array([[3.0], [5.0]]), w)
        assert est == pytest.approx(np.array([4.0]))

    def test_weighted_average(self):
        w = WeightVector(weights=np.array([0.5, 0.5, 1.0]), total=2.0)
        est = ml_estimate(np.array([[2.0], [2.0], [5.0]]), w)
        assert est == pytest.approx(np.array([3.5]))

    def test_negative_weights_leave_convex_hull(self):
        w = WeightVector(weights=np.array([-1.0, 2.0]), total=1.0)
        est = ml_estimate(np.array([[0.0], [1.0]]), w)
        assert est == pytest.approx(np.array([2.0]))

    def test_degenerate_total_raises(self):
        w = WeightVector(weights=np.array([1.0, -1.0]), total=0.0)
        with pytest.raises(DegenerateWeightsError):
            ml_estimate(np.ones((2, 3)), w)

    def test_uniform_fallback_fires_only_when_degenerate(self):
        w = WeightVector(weights=np.array([1.0, -1.0]), total=0.0)
        fixed, fired = uniform_fallback(w)
        assert fired and fixed.weights == pytest.approx(np.ones(2))
        ok = WeightVector(weights=np.array([0.5, 0.5]), total=1.0)
        same, fired = uniform_fallback(ok)
        assert not fired and same is ok


class TestEmpiricalCovariance:
    def test_clone_rows_fully_correlated(self):
        s = np.array([[1.0, 2.0, 5.0], [1.0, 2.0, 5.0]])
        c = empirical_covariance(s)
        assert c[0, 1] == pytest.approx(1.0, abs=1e-12)
        assert c[0, 0] == pytest.approx(1.0, abs=1e-12)

    def test_independent_rows_nearly_uncorrelated(self):
        rng = np.random.default_rng(4)
        c = empirical_covariance(rng.standard_normal((2, 10_000)))
        assert abs(c[0, 1]) < 0.05

    def test_reference_correlations_overestimated(self):
        # The shared utility term inflates every correlation: within-group
        # entries approach (sigma_f^2 + 1) / (sigma_f^2 + sigma_d^2 + 1) and
        # group-vs-independent entries 1 / (sigma_f^2 + sigma_d^2 + 1),
        # versus 1/1.01 and 0 for the noise-only covariance.
        _, scores = sample_scores(
            reference_embedding(20, 4), REF_PARAMS, 10_000, np.random.default_rng(8)
        )
        c = empirical_covariance(scores)
        assert c[0, 1] == pytest.approx(2.0 / 2.01, abs=0.02)
        assert c[0, 20] == pytest.approx(1.0 / 2.01, abs=0.05)
        assert c[0, 1] > 1.0 / 1.01
        assert c[0, 20] > 0.2

    def test_needs_two_columns(self):
        with pytest.raises(UsageError):
            empirical_covariance(np.ones((3, 1)))


class TestGaRule:
    def test_uniform_covariance_matches_range_voting_exactly(self):
        e = np.eye(6)
        params = NoiseParams(sigma_d=0.0, sigma_f=1.0)
        rng = np.random.default_rng(10)
        for _ in range(50):
            s = random_scores(rng, 6, 9)
            assert ga_rule(s, e, params).winner == range_voting(s).winner

    def test_zero_noise_picks_true_best(self):
        e = reference_embedding(4, 2)
        params = NoiseParams(0.0, 0.0)
        rng = np.random.default_rng(2)
        u = rng.standard_normal(8)
        scores = np.tile(u, (6, 1))
        out = ga_rule(scores, e, params)
        assert out.winner == int(np.argmax(u))

    def test_group_members_downweighted(self):
        # Weights (1/3, 1/3, 1/3, 1) balance a clone triple against the
        # loner: the group's favorite (candidate 0) wins plain averaging,
        # while the reweighted rule follows the loner to candidate 2.
        e = reference_embedding(3, 1)
        params = NoiseParams(0.0, 1.0)
        s = np.array(
            [
                [3.0, 1.0, 2.0, 2.0],
                [3.0, 1.0, 2.0, 2.0],
                [3.0, 1.0, 2.0, 2.0],
                [0.0, 2.0, 4.0, 2.0],
            ]
        )
        assert range_voting(s).winner == 0
        assert ga_rule(s, e, params).winner == 2


class TestMlRule:
    def test_training_changes_the_estimate_basis(self):
        rng = np.random.default_rng(5)
        _, scores = sample_scores(reference_embedding(20, 4), REF_PARAMS, 20, rng)
        _, training = sample_scores(reference_embedding(20, 4), REF_PARAMS, 2000, rng)
        plain = ml_rule(scores)
        trained = ml_rule(scores, training)
        assert plain.welfare.shape == trained.welfare.shape == (20,)

    def test_trained_weights_approach_model_weights(self):
        # with a long history the estimated weights separate group members
        # from independents like the model-aware weights do
        e = reference_embedding(20, 4)
        rng = np.random.default_rng(17)
        _, training = sample_scores(e, REF_PARAMS, 50_000, rng)
        sigma_hat = empirical_covariance(training)
        w = weights_from_covariance(sigma_hat).weights
        group, indep = w[:20].mean(), w[20:].mean()
        assert indep > 5 * abs(group)

    def test_fallback_flag_returned(self):
        rng = np.random.default_rng(6)
        _, scores = sample_scores(reference_embedding(4, 2), REF_PARAMS, 12, rng)
        outcome, fell = ml_rule(scores, return_fallback=True)
        assert isinstance(fell, bool)
        assert outcome.welfare.shape == (12,)
