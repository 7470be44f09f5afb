"""Baseline aggregation rules: range voting, approval voting, Nash product,
single agent, and the random-winner control.

All observational rules standardize each agent's row first. The welfare
helpers (prefixed ``welfare_``) take already-standardized scores so the
Monte Carlo harness can share preprocessing across rules within a trial;
the public rule functions wrap them for standalone use.
"""

from __future__ import annotations

import numpy as np

from .core import (
    AggregationOutcome,
    UsageError,
    outcome_from_welfare,
    select_winner,
    validate_scores,
)
from .preprocessing import standardize_rows

NASH_FLOOR = 0.1
SHIFT_MEAN = 2.0

#: Canonical rule names, in the reference-figure display order.
RULE_NAMES = ("ga", "ml+", "ev+", "ev", "av", "np", "rv", "sa", "ml", "rw")
TRAINED_RULES = frozenset({"ev+", "ml+"})


def welfare_range(z: np.ndarray) -> np.ndarray:
    return z.sum(axis=0)


def welfare_nash(z: np.ndarray) -> np.ndarray:
    # Product in log domain: 24 factors overflow/underflow linearly.
    clamped = np.maximum(z + SHIFT_MEAN, NASH_FLOOR)
    return np.log(clamped).sum(axis=0)


def approval_winner(z: np.ndarray) -> tuple[np.ndarray, int]:
    """Approval counts plus the winner under the product-of-positives tie-break.

    An agent approves every candidate it scores at or above its own mean,
    which is >= 0 after standardization. Among candidates with the maximal
    count, the largest product of the strictly positive scores of approving
    agents wins (empty product = 1); remaining ties go to the lowest index.
    """
    approvals = (z >= 0.0).sum(axis=0)
    best = approvals.max()
    tied = np.flatnonzero(approvals == best)
    if tied.size == 1:
        return approvals, int(tied[0])
    pos = np.where(z[:, tied] > 0.0, z[:, tied], 1.0)
    products = pos.prod(axis=0)
    return approvals, int(tied[select_winner(products)])


def range_voting(scores: np.ndarray) -> AggregationOutcome:
    """Welfare = per-candidate sum of standardized scores."""
    return outcome_from_welfare(welfare_range(standardize_rows(scores)))


def approval_voting(scores: np.ndarray) -> AggregationOutcome:
    """Welfare = approval counts; ties broken by the product of positive scores."""
    z = standardize_rows(scores)
    approvals, winner = approval_winner(z)
    return AggregationOutcome(welfare=approvals.astype(np.float64), winner=winner)


def nash_product(scores: np.ndarray) -> AggregationOutcome:
    """Welfare = log-product of scores shifted to mean 2 and floored at 0.1."""
    return outcome_from_welfare(welfare_nash(standardize_rows(scores)))


def single_agent(scores: np.ndarray, agent_index: int = 0) -> AggregationOutcome:
    """Welfare = one agent's standardized row; the no-aggregation baseline."""
    arr = validate_scores(scores, min_candidates=2)
    if not 0 <= agent_index < arr.shape[0]:
        raise UsageError(f"agent index {agent_index} out of range for n={arr.shape[0]}")
    return outcome_from_welfare(standardize_rows(arr)[agent_index])


def random_winner(m: int, rng: np.random.Generator) -> AggregationOutcome:
    """Uniformly random winner, ignoring all scores; the chance baseline."""
    if m < 1:
        raise UsageError("need at least one candidate")
    return AggregationOutcome(welfare=np.zeros(m), winner=int(rng.integers(m)))
