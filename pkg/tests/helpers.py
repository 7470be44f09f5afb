"""Shared test utilities: independent oracles and instance generators.

The oracles here deliberately avoid the library's own code paths (explicit
loops, direct SVD of the literal candidate matrices) so spectral and
likelihood results are checked against a second route.
"""

from __future__ import annotations

import numpy as np


def indicator_embedding(group_sizes: list[int], p: int | None = None) -> np.ndarray:
    """Exact group indicator rows (unit basis vectors), padded to p columns."""
    n = sum(group_sizes)
    k = len(group_sizes)
    p = k if p is None else p
    assert p >= k
    emb = np.zeros((n, p))
    row = 0
    for l, size in enumerate(group_sizes):
        emb[row : row + size, l] = 1.0
        row += size
    return emb


def group_product_welfare(scores_nonneg: np.ndarray, group_sizes: list[int]) -> np.ndarray:
    """Product over groups of the group's score sum, by explicit loops."""
    m = scores_nonneg.shape[1]
    out = np.ones(m)
    for j in range(m):
        value = 1.0
        row = 0
        for size in group_sizes:
            total = 0.0
            for i in range(row, row + size):
                total += scores_nonneg[i, j]
            value *= total
            row += size
        out[j] = value
    return out


def partitions(n: int):
    """All integer partitions of n, as non-increasing lists."""
    if n == 0:
        yield []
        return
    for first in range(n, 0, -1):
        for rest in partitions(n - first):
            if not rest or rest[0] <= first:
                yield [first] + rest


def random_scores(rng: np.random.Generator, n: int, m: int) -> np.ndarray:
    return rng.standard_normal((n, m))


def random_affine(rng: np.random.Generator, scores: np.ndarray) -> np.ndarray:
    """Per-agent positive affine transform a_i * row + b_i."""
    n = scores.shape[0]
    a = rng.uniform(0.1, 5.0, size=(n, 1))
    b = rng.uniform(-10.0, 10.0, size=(n, 1))
    return a * scores + b
