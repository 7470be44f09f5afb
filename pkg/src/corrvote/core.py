"""Shared domain types, winner selection, and the relative-utility metric.

Scores live in plain float64 arrays of shape (n_agents, n_candidates); the
dataclasses here are thin immutable containers around them. Welfare vectors
may contain ``-inf`` sentinels (multiplicative rules emit them for zero
welfare) but never NaN.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class UsageError(ValueError):
    """Raised when an input violates an operation's preconditions."""


def validate_scores(scores: np.ndarray, min_candidates: int = 1) -> np.ndarray:
    """Check an (n, m) score matrix: 2-D, non-empty, finite entries."""
    arr = np.asarray(scores, dtype=np.float64)
    if arr.ndim != 2:
        raise UsageError(f"score matrix must be 2-D, got shape {arr.shape}")
    n, m = arr.shape
    if n < 1 or m < min_candidates:
        raise UsageError(
            f"score matrix needs at least 1 agent and {min_candidates} "
            f"candidate(s), got {n}x{m}"
        )
    if not np.isfinite(arr).all():
        raise UsageError("score matrix contains non-finite entries")
    return arr


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.ascontiguousarray(arr, dtype=np.float64)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ChoiceProblem:
    """One choice instance: hidden utilities plus the scores the rules see.

    ``training_scores`` holds estimates on disjoint training candidates for
    the trained rules; untrained rules must never read it.
    """

    utilities: np.ndarray
    scores: np.ndarray
    training_scores: np.ndarray | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "utilities", _freeze(np.atleast_1d(self.utilities)))
        object.__setattr__(self, "scores", _freeze(validate_scores(self.scores)))
        if self.utilities.shape != (self.scores.shape[1],):
            raise UsageError(
                f"utilities length {self.utilities.shape} does not match "
                f"{self.scores.shape[1]} candidates"
            )
        if self.training_scores is not None:
            tr = _freeze(validate_scores(self.training_scores))
            if tr.shape[0] != self.scores.shape[0]:
                raise UsageError("training scores must have the same agent count")
            object.__setattr__(self, "training_scores", tr)

    @property
    def n_agents(self) -> int:
        return self.scores.shape[0]

    @property
    def n_candidates(self) -> int:
        return self.scores.shape[1]


@dataclass(frozen=True)
class AggregationOutcome:
    """Per-candidate welfare and the deterministic winner index."""

    welfare: np.ndarray
    winner: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "welfare", _freeze(np.atleast_1d(self.welfare)))


def select_winner(welfare: np.ndarray) -> int:
    """Index of the maximal welfare entry, ties broken by lowest index.

    ``-inf`` is a legal sentinel and ranks below every finite value; an
    all-sentinel vector yields index 0.
    """
    w = np.asarray(welfare, dtype=np.float64)
    if w.ndim != 1 or w.size == 0:
        raise UsageError("welfare must be a non-empty 1-D vector")
    if np.isnan(w).any():
        raise UsageError("welfare contains NaN")
    return int(np.argmax(w))


def outcome_from_welfare(welfare: np.ndarray) -> AggregationOutcome:
    return AggregationOutcome(welfare=welfare, winner=select_winner(welfare))


def relative_utility(utilities: np.ndarray, winner: int) -> float:
    """Rescale the winner's utility to [0, 1] within its candidate set.

    Returns (u[winner] - u_min) / (u_max - u_min). A constant utility vector
    returns 1.0 by convention: every choice is optimal, and the harness must
    not divide by zero on a measure-zero draw.
    """
    u = np.asarray(utilities, dtype=np.float64)
    if u.ndim != 1 or u.size < 2:
        raise UsageError("need at least 2 candidate utilities")
    if not 0 <= winner < u.size:
        raise UsageError(f"winner index {winner} out of range for m={u.size}")
    lo = float(u.min())
    hi = float(u.max())
    if hi == lo:
        return 1.0
    return (float(u[winner]) - lo) / (hi - lo)
