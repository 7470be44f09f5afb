"""Per-agent score normalizations shared by all rules.

Every transform here acts row-wise (one row per agent) and is invariant to
per-agent positive affine rescalings of the raw scores, which is what lets
agents with different score scales be compared at all. Population standard
deviation (divide by the column count) is used throughout.
"""

from __future__ import annotations

import numpy as np

from .core import UsageError, validate_scores


def _row_stats(scores: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    mean = scores.mean(axis=1, keepdims=True)
    std = scores.std(axis=1, keepdims=True)
    return mean, std


def standardize_rows(scores: np.ndarray) -> np.ndarray:
    """Rescale each agent's row to zero mean and unit population std.

    A constant row (zero variance) maps to all zeros.
    """
    arr = validate_scores(scores, min_candidates=2)
    mean, std = _row_stats(arr)
    safe = np.where(std == 0.0, 1.0, std)
    return (arr - mean) / safe


def shift_to_positive(
    scores: np.ndarray, target_mean: float = 2.0, floor: float = 0.1
) -> np.ndarray:
    """Standardize rows, shift them to ``target_mean``, clamp at ``floor``.

    Constant rows become all ``target_mean``. Used with floor 0.1 for the
    multiplicative welfare (strictly positive factors) and floor 0 where
    only non-negativity is required.
    """
    shifted = standardize_rows(scores) + target_mean
    return np.maximum(shifted, floor)


def compute_embeddings(score_basis: np.ndarray) -> np.ndarray:
    """Agent embeddings: z-scored score rows rescaled to unit Euclidean norm.

    The z-score gives every agent's vector the same mean and spread; the
    extra 1/sqrt(p) brings each row to norm 1, so clone agents map to equal
    unit vectors and agents with independent estimation errors approach
    orthogonality as the candidate count grows. A constant row falls back to
    all zeros (it carries no directional information).
    """
    z = standardize_rows(score_basis)
    return z / np.sqrt(z.shape[1])


def concat_scores(scores: np.ndarray, training: np.ndarray | None) -> np.ndarray:
    """Current columns followed by training columns (if any)."""
    if training is None:
        return np.asarray(scores, dtype=np.float64)
    if training.shape[0] != scores.shape[0]:
        raise UsageError("training scores must have the same agent count")
    return np.concatenate([scores, training], axis=1)
