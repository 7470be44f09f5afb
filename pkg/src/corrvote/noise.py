"""Embedding construction and the Gaussian noise model for synthetic problems.

An embedding matrix E (n agents x k features, unit-norm rows) fixes the
correlation structure: agent i's estimate for a candidate is

    s_i = u + sigma_d * d_i + sigma_f * sum_l E[i, l] * f_l

with d (per agent) and f (per feature) independent standard normals drawn
fresh per candidate. Conditional on u, the score column is multivariate
normal with mean u * ones and covariance sigma_d^2 I + sigma_f^2 E E^T.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import ChoiceProblem, UsageError, _freeze

ROW_NORM_TOL = 1e-9


@dataclass(frozen=True)
class NoiseParams:
    """Noise intensities: sigma_d independent per agent, sigma_f shared via features."""

    sigma_d: float
    sigma_f: float

    def __post_init__(self) -> None:
        if self.sigma_d < 0 or self.sigma_f < 0:
            raise UsageError("noise intensities must be non-negative")


def validate_embedding(values: np.ndarray) -> np.ndarray:
    """Check an (n, k) embedding: unit-norm rows, each with a non-zero entry."""
    arr = np.asarray(values, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
        raise UsageError(f"embedding must be a non-empty 2-D matrix, got {arr.shape}")
    if not np.isfinite(arr).all():
        raise UsageError("embedding contains non-finite entries")
    norms = np.linalg.norm(arr, axis=1)
    bad = np.flatnonzero(np.abs(norms - 1.0) > ROW_NORM_TOL)
    if bad.size:
        raise UsageError(
            f"embedding row {bad[0]} has norm {norms[bad[0]]:.12g}, expected 1"
        )
    return arr


def reference_embedding(group_size: int, n_independent: int) -> np.ndarray:
    """Block embedding: one fully correlated group plus independent agents.

    Rows 0..group_size-1 share feature 0; each remaining agent owns its own
    feature. Shape (group_size + n_independent, 1 + n_independent).
    """
    if group_size < 0 or n_independent < 0 or group_size + n_independent < 1:
        raise UsageError("need at least one agent")
    n = group_size + n_independent
    k = 1 + n_independent
    e = np.zeros((n, k))
    e[:group_size, 0] = 1.0
    for t in range(n_independent):
        e[group_size + t, 1 + t] = 1.0
    return _freeze(e)


def cohesion_embedding(
    alpha: float, group_size: int = 20, n_independent: int = 4
) -> np.ndarray:
    """Index-distance correlation inside the group, tuned by alpha in [0, 1].

    The group block's raw row i is alpha^|i - i'| over group features i'
    (0^0 := 1, so alpha=0 gives the identity block and fully independent
    agents), rescaled to unit Euclidean norm. alpha=1 collapses every group
    row to the uniform vector, which induces the same covariance as
    ``reference_embedding``. Independent agents keep their own features.
    """
    if not 0.0 <= alpha <= 1.0:
        raise UsageError(f"alpha must lie in [0, 1], got {alpha}")
    idx = np.arange(group_size)
    with np.errstate(invalid="ignore"):
        block = np.power(alpha, np.abs(idx[:, None] - idx[None, :]), dtype=np.float64)
    np.fill_diagonal(block, 1.0)
    block /= np.linalg.norm(block, axis=1, keepdims=True)
    n = group_size + n_independent
    e = np.zeros((n, group_size + n_independent))
    e[:group_size, :group_size] = block
    e[group_size:, group_size:] = np.eye(n_independent)
    return _freeze(e)


def absorption_embedding(
    beta: float, group_size: int = 20, n_independent: int = 4
) -> np.ndarray:
    """Leak the group's feature into the independent agents, tuned by beta.

    Independent agent t gets c*beta on the group feature and c*(1-beta) on
    its own, with c = 1/sqrt(beta^2 + (1-beta)^2) keeping rows unit norm.
    beta=0 reproduces ``reference_embedding``; beta=1 fuses all agents into
    a single group.
    """
    if not 0.0 <= beta <= 1.0:
        raise UsageError(f"beta must lie in [0, 1], got {beta}")
    c = 1.0 / np.sqrt(beta**2 + (1.0 - beta) ** 2)
    n = group_size + n_independent
    e = np.zeros((n, 1 + n_independent))
    e[:group_size, 0] = 1.0
    e[group_size:, 0] = c * beta
    for t in range(n_independent):
        e[group_size + t, 1 + t] = c * (1.0 - beta)
    return _freeze(e)


def model_covariance(embedding: np.ndarray, params: NoiseParams) -> np.ndarray:
    """Score-noise covariance sigma_d^2 I + sigma_f^2 E E^T."""
    e = validate_embedding(embedding)
    n = e.shape[0]
    return params.sigma_d**2 * np.eye(n) + params.sigma_f**2 * (e @ e.T)


def sample_scores(
    embedding: np.ndarray,
    params: NoiseParams,
    m: int,
    rng: np.random.Generator,
) -> tuple[np.ndarray, np.ndarray]:
    """Draw m candidates' utilities and the full score matrix in one batch.

    Draw order is fixed (utilities, then agent noise, then feature noise) so
    a given generator state maps to one problem bit-for-bit.
    """
    n, k = embedding.shape
    u = rng.standard_normal(m)
    d = rng.standard_normal((n, m))
    f = rng.standard_normal((k, m))
    scores = u[None, :] + params.sigma_d * d + params.sigma_f * (embedding @ f)
    return u, scores


def sample_problem(
    embedding: np.ndarray,
    params: NoiseParams,
    m: int,
    m_train: int,
    rng: np.random.Generator,
) -> ChoiceProblem:
    """Sample one choice problem, plus m_train disjoint training candidates.

    The current candidates are always drawn first from ``rng``, so the
    problem a trial sees does not depend on whether training columns were
    requested.
    """
    if m < 1 or m_train < 0:
        raise UsageError("need m >= 1 and m_train >= 0")
    e = validate_embedding(embedding)
    u, scores = sample_scores(e, params, m, rng)
    training = None
    if m_train > 0:
        _, training = sample_scores(e, params, m_train, rng)
    return ChoiceProblem(utilities=u, scores=scores, training_scores=training)
