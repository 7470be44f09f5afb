"""Embedded voting: spectral aggregation over inferred agent embeddings.

The rule treats each agent's normalized score history as a unit vector, so
correlated agents point the same way and independent ones spread out. For a
candidate, scaling each agent's vector by the square root of its (shifted,
non-negative) score and taking singular values recovers, in the ideal
fully-grouped case, one value per group whose square is the group's score
sum; the welfare multiplies the k_hat largest squared singular values, a
Nash product over inferred groups. k_hat counts the singular values of the
full normalized score matrix above 0.95 of their average, the discount
keeping near-ties above the bar when all agents are independent.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AggregationOutcome, UsageError, outcome_from_welfare
from .kernels import ev_log_welfare, gram_squared_spectrum
from .preprocessing import compute_embeddings, concat_scores, shift_to_positive

K_HAT_DISCOUNT = 0.95


@dataclass(frozen=True)
class SpectralDiagnostics:
    """Singular values (descending) of the normalized score matrix and k_hat."""

    singular_values: np.ndarray
    k_hat: int


def estimate_k(embeddings: np.ndarray) -> SpectralDiagnostics:
    """Estimated number of relevant embedding dimensions.

    Counts singular values strictly above K_HAT_DISCOUNT times the mean of
    all min(n, p) singular values, clamped into [1, min(n, p)]. An all-zero
    embedding set (every agent constant) degenerates to k_hat = 1.
    """
    emb = np.asarray(embeddings, dtype=np.float64)
    if emb.ndim != 2 or emb.size == 0:
        raise UsageError("embeddings must be a non-empty 2-D matrix")
    singular = np.sqrt(gram_squared_spectrum(emb))
    threshold = K_HAT_DISCOUNT * singular.mean()
    k_hat = int((singular > threshold).sum())
    return SpectralDiagnostics(singular_values=singular, k_hat=max(1, k_hat))


def candidate_matrix(
    column_index: int, scores_nonneg: np.ndarray, embeddings: np.ndarray
) -> np.ndarray:
    """Row i = sqrt(score of agent i for the candidate) times embedding i."""
    scores = np.asarray(scores_nonneg, dtype=np.float64)
    col = scores[:, column_index]
    if (col < 0).any():
        raise UsageError(
            f"candidate {column_index} has negative scores; clamp upstream"
        )
    return np.sqrt(col)[:, None] * np.asarray(embeddings, dtype=np.float64)


def ev_welfare(
    scores_nonneg: np.ndarray, embeddings: np.ndarray, k_hat: int
) -> np.ndarray:
    """Log-domain product of the top-k_hat squared singular values, per candidate.

    A zero singular value inside the top k_hat yields the -inf sentinel
    (zero multiplicative welfare ranks last).
    """
    scores = np.asarray(scores_nonneg, dtype=np.float64)
    if k_hat < 1:
        raise UsageError("k_hat must be at least 1")
    if scores.min() < 0:
        raise UsageError("spectral welfare needs non-negative scores")
    emb = np.asarray(embeddings, dtype=np.float64)
    gram = emb @ emb.T
    return ev_log_welfare(gram, scores, k_hat)


def embedded_voting(
    scores: np.ndarray,
    training: np.ndarray | None = None,
    return_diagnostics: bool = False,
) -> AggregationOutcome | tuple[AggregationOutcome, SpectralDiagnostics]:
    """The full spectral rule; pass training scores for the trained variant.

    Embeddings, k_hat, and the mean-2 shift statistics all come from the
    concatenation of current and training columns; welfare is computed over
    the current candidates only.
    """
    basis = concat_scores(scores, training)
    emb = compute_embeddings(basis)
    diag = estimate_k(emb)
    nonneg = shift_to_positive(basis, target_mean=2.0, floor=0.0)[:, : scores.shape[1]]
    outcome = outcome_from_welfare(ev_welfare(nonneg, emb, diag.k_hat))
    if return_diagnostics:
        return outcome, diag
    return outcome


__all__ = [
    "SpectralDiagnostics",
    "estimate_k",
    "candidate_matrix",
    "ev_welfare",
    "embedded_voting",
    "K_HAT_DISCOUNT",
]
