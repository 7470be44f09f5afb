"""Maximum-likelihood aggregation via covariance-weighted averaging.

With score noise that is multivariate normal with covariance Sigma, the
likelihood-maximizing utility estimate for a candidate is the weighted
average sum(w_i s_i) / sum(w_i) with w = ones @ pinv(Sigma): correlated
agents share their weight, independent ones keep full weight. The
model-aware variant uses the true Sigma; the observational variants plug in
the empirical covariance of the (standardized) observed scores, which
deliberately inherits that estimate's pathologies when the candidate count
is close to the agent count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import AggregationOutcome, UsageError, outcome_from_welfare, validate_scores
from .noise import NoiseParams, model_covariance
from .preprocessing import concat_scores, standardize_rows

#: Relative pseudo-inverse cutoff. Small enough to keep the near-singular
#: covariance pathology intact, sized so the barely-full-rank regime (one
#: more candidate than agents) matches the published dip depth.
PINV_RCOND = 6e-8

#: |sum of weights| below this is degenerate; callers fall back to uniform.
OMEGA_EPS = 1e-12

COVARIANCE_TOL = 1e-9


class DegenerateWeightsError(UsageError):
    """Raised when the likelihood weights sum to (numerically) zero."""


@dataclass(frozen=True)
class WeightVector:
    """Per-agent likelihood weights; entries may go negative near singularity."""

    weights: np.ndarray
    total: float

    def __post_init__(self) -> None:
        w = np.asarray(self.weights, dtype=np.float64)
        if not np.isfinite(w).all():
            raise UsageError("weights must be finite")
        object.__setattr__(self, "weights", w)


def validate_covariance(sigma: np.ndarray) -> np.ndarray:
    arr = np.asarray(sigma, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise UsageError(f"covariance must be square, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise UsageError("covariance contains non-finite entries")
    if np.abs(arr - arr.T).max() > COVARIANCE_TOL:
        raise UsageError("covariance is not symmetric")
    return arr


def weights_from_covariance(sigma: np.ndarray) -> WeightVector:
    """w = ones @ pinv(Sigma); the pseudo-inverse keeps this total."""
    arr = validate_covariance(sigma)
    inv = np.linalg.pinv(arr, rcond=PINV_RCOND, hermitian=True)
    weights = inv.sum(axis=0)
    return WeightVector(weights=weights, total=float(weights.sum()))


def ml_estimate(scores: np.ndarray, weights: WeightVector) -> np.ndarray:
    """Per-candidate weighted average sum(w_i s_i) / sum(w_i)."""
    if abs(weights.total) <= OMEGA_EPS:
        raise DegenerateWeightsError(
            f"weight total {weights.total:.3e} is numerically zero"
        )
    arr = np.asarray(scores, dtype=np.float64)
    if arr.shape[0] != weights.weights.size:
        raise UsageError("weight length does not match agent count")
    return (weights.weights @ arr) / weights.total


def uniform_fallback(weights: WeightVector) -> tuple[WeightVector, bool]:
    """Replace a degenerate weight vector with uniform weights.

    Returns (weights, fired). Keeps the harness total: a pathological draw
    degrades one rule's trial, never aborts a sweep.
    """
    if abs(weights.total) > OMEGA_EPS:
        return weights, False
    n = weights.weights.size
    return WeightVector(weights=np.ones(n), total=float(n)), True


def empirical_covariance(observed: np.ndarray) -> np.ndarray:
    """Population covariance of row-standardized scores (agents as variables).

    Standardized rows are already centered, so this is the correlation-style
    estimate Z Z^T / p. Its rank is at most min(n, p - 1); the shared utility
    component of the scores inflates every off-diagonal entry.
    """
    arr = validate_scores(observed, min_candidates=2)
    z = standardize_rows(arr)
    return (z @ z.T) / z.shape[1]


def weighted_outcome(
    basis: np.ndarray, evaluate: np.ndarray
) -> tuple[AggregationOutcome, WeightVector, bool]:
    """Weights from the basis covariance applied to ``evaluate`` columns.

    ``basis`` must already be standardized row-wise. Returns the outcome,
    the weights actually used, and whether the uniform fallback fired.
    """
    sigma_hat = (basis @ basis.T) / basis.shape[1]
    weights, fallback = uniform_fallback(weights_from_covariance(sigma_hat))
    return outcome_from_welfare(ml_estimate(evaluate, weights)), weights, fallback


def ga_rule(
    scores: np.ndarray, embedding: np.ndarray, params: NoiseParams
) -> AggregationOutcome:
    """Model-aware weighted average: weights from the true noise covariance.

    Scores are standardized like every other rule's input; with uniform
    weights (identity covariance) the winner coincides with range voting's
    exactly. Zero-noise models give zero covariance and fall back to
    uniform weights, i.e. plain averaging.
    """
    z = standardize_rows(scores)
    weights, _ = uniform_fallback(
        weights_from_covariance(model_covariance(embedding, params))
    )
    return outcome_from_welfare(ml_estimate(z, weights))


def ml_rule(
    scores: np.ndarray,
    training: np.ndarray | None = None,
    return_fallback: bool = False,
) -> AggregationOutcome | tuple[AggregationOutcome, bool]:
    """Observational weighted average; pass training scores for the trained variant.

    Standardization statistics and the covariance estimate both use the
    concatenated (current + training) columns; the welfare is evaluated on
    the current candidates.
    """
    basis = standardize_rows(concat_scores(scores, training))
    outcome, _, fallback = weighted_outcome(basis, basis[:, : scores.shape[1]])
    if return_fallback:
        return outcome, fallback
    return outcome
