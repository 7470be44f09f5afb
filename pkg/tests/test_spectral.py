import math

import numpy as np
import pytest

from corrvote.core import UsageError
from corrvote.noise import NoiseParams, reference_embedding, sample_scores
from corrvote.preprocessing import compute_embeddings
from corrvote.spectral import (
    candidate_matrix,
    embedded_voting,
    estimate_k,
    ev_welfare,
)

from helpers import (
    group_product_welfare,
    indicator_embedding,
    random_affine,
    random_scores,
)


class TestEstimateK:
    def test_exact_groups_recovered(self):
        emb = indicator_embedding([2, 1], p=3)
        diag = estimate_k(emb)
        assert diag.k_hat == 2
        # the spectrum itself is the group sizes, square-rooted
        assert diag.singular_values == pytest.approx(
            np.sqrt(np.array([2.0, 1.0, 0.0]))
        )

    def test_independent_unit_rows_keep_everything(self):
        emb = indicator_embedding([1] * 6, p=50)
        assert estimate_k(emb).k_hat == 6

    def test_single_agent(self):
        emb = np.ones((1, 10)) / math.sqrt(10)
        assert estimate_k(emb).k_hat == 1

    def test_all_zero_embeddings_degenerate_to_one(self):
        diag = estimate_k(np.zeros((4, 6)))
        assert diag.k_hat == 1
        assert diag.singular_values == pytest.approx(np.zeros(4))

    def test_spectrum_truncated_to_matrix_rank_budget(self):
        emb = compute_embeddings(np.random.default_rng(0).standard_normal((24, 20)))
        diag = estimate_k(emb)
        assert diag.singular_values.shape == (20,)
        assert 1 <= diag.k_hat <= 20

    def test_reference_scenario_recovers_five_dimensions(self):
        # One fused group plus four independents: the estimated dimension
        # count should be 5 in nearly every large-sample draw.
        e = reference_embedding(20, 4)
        params = NoiseParams(0.1, 1.0)
        hits = 0
        for seed in range(120):
            _, scores = sample_scores(e, params, 1000, np.random.default_rng(seed))
            if estimate_k(compute_embeddings(scores)).k_hat == 5:
                hits += 1
        assert hits >= 114  # 95%

    def test_empty_rejected(self):
        with pytest.raises(UsageError):
            estimate_k(np.zeros((0, 3)))


class TestCandidateMatrix:
    def test_square_root_scaling(self):
        emb = indicator_embedding([2, 1])
        mat = candidate_matrix(0, np.array([[4.0], [5.0], [7.0]]), emb)
        assert mat == pytest.approx(
            np.array([[2.0, 0.0], [math.sqrt(5.0), 0.0], [0.0, math.sqrt(7.0)]])
        )
        squared = np.sort(np.linalg.svd(mat, compute_uv=False) ** 2)[::-1]
        assert squared == pytest.approx(np.array([9.0, 7.0]))

    def test_zero_score_gives_zero_row(self):
        emb = indicator_embedding([1, 1])
        mat = candidate_matrix(0, np.array([[0.0], [3.0]]), emb)
        assert mat[0] == pytest.approx(np.zeros(2))

    def test_negative_score_rejected(self):
        with pytest.raises(UsageError):
            candidate_matrix(0, np.array([[-1.0], [3.0]]), indicator_embedding([1, 1]))

    def test_spectrum_equals_group_sums(self):
        # Squared singular values of the indicator candidate matrix are the
        # per-group score sums; their product is the group-product welfare.
        rng = np.random.default_rng(12)
        for _ in range(30):
            sizes = [int(g) for g in rng.integers(1, 4, size=rng.integers(1, 4))]
            n = sum(sizes)
            scores = rng.uniform(0.0, 5.0, size=(n, 4))
            emb = indicator_embedding(sizes)
            for j in range(scores.shape[1]):
                sv2 = np.linalg.svd(candidate_matrix(j, scores, emb), compute_uv=False) ** 2
                oracle = group_product_welfare(scores[:, j : j + 1], sizes)[0]
                assert np.prod(sv2[: len(sizes)]) == pytest.approx(oracle, rel=1e-9)


class TestEvWelfare:
    def test_two_group_example(self):
        emb = indicator_embedding([2, 1])
        welfare = ev_welfare(np.array([[4.0], [5.0], [7.0]]), emb, k_hat=2)
        assert welfare[0] == pytest.approx(math.log(63.0))

    def test_clones_rank_like_their_shared_scores(self):
        scores = np.array([[1.0, 4.0, 2.5], [1.0, 4.0, 2.5], [1.0, 4.0, 2.5]])
        emb = indicator_embedding([3])
        welfare = ev_welfare(scores, emb, k_hat=1)
        assert np.argsort(welfare).tolist() == np.argsort(scores[0]).tolist()

    def test_doubling_a_group_shifts_welfare_uniformly(self):
        rng = np.random.default_rng(3)
        scores = rng.uniform(0.5, 4.0, size=(3, 5))
        emb = indicator_embedding([2, 1])
        base = ev_welfare(scores, emb, k_hat=2)
        doubled_scores = np.vstack([scores[:2], scores[:2], scores[2:]])
        doubled_emb = indicator_embedding([4, 1])
        shifted = ev_welfare(doubled_scores, doubled_emb, k_hat=2)
        diff = shifted - base
        assert diff == pytest.approx(np.full(5, math.log(2.0)))
        assert int(np.argmax(shifted)) == int(np.argmax(base))

    def test_zero_eigenvalue_inside_top_k_is_sentinel(self):
        emb = indicator_embedding([1, 1])
        welfare = ev_welfare(np.array([[0.0, 1.0], [1.0, 1.0]]), emb, k_hat=2)
        assert welfare[0] == -np.inf
        assert np.isfinite(welfare[1])

    def test_rejects_negative_scores_and_bad_k(self):
        emb = indicator_embedding([2])
        with pytest.raises(UsageError):
            ev_welfare(np.array([[-0.1], [1.0]]), emb, k_hat=1)
        with pytest.raises(UsageError):
            ev_welfare(np.array([[0.1], [1.0]]), emb, k_hat=0)


class TestEmbeddedVoting:
    def test_ideal_groups_match_brute_force(self):
        # With exact indicator embeddings, the spectral winner must agree
        # with the direct product-of-group-sums argmax.
        rng = np.random.default_rng(42)
        for _ in range(60):
            sizes = [int(g) for g in rng.integers(1, 4, size=rng.integers(1, 5))]
            n = sum(sizes)
            m = int(rng.integers(2, 7))
            scores = rng.uniform(0.0, 5.0, size=(n, m))
            emb = indicator_embedding(sizes, p=max(n, len(sizes)))
            k_hat = estimate_k(emb).k_hat
            assert k_hat == len(sizes)
            welfare = ev_welfare(scores, emb, k_hat)
            oracle = group_product_welfare(scores, sizes)
            assert int(np.argmax(welfare)) == int(np.argmax(oracle))

    def test_trained_and_untrained_differ_only_by_basis(self):
        rng = np.random.default_rng(6)
        scores = rng.standard_normal((6, 8))
        training = rng.standard_normal((6, 100))
        plain = embedded_voting(scores)
        trained = embedded_voting(scores, training)
        assert plain.welfare.shape == trained.welfare.shape == (8,)

    def test_diagnostics_exposed(self):
        rng = np.random.default_rng(6)
        outcome, diag = embedded_voting(
            rng.standard_normal((5, 9)), return_diagnostics=True
        )
        assert 1 <= diag.k_hat <= 5
        assert outcome.welfare.shape == (9,)

    def test_winner_invariant_to_per_agent_affine_rescaling(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            s = random_scores(rng, 6, 10)
            assert embedded_voting(s).winner == embedded_voting(random_affine(rng, s)).winner

    def test_single_candidate_rejected(self):
        with pytest.raises(UsageError):
            embedded_voting(np.ones((3, 1)))
