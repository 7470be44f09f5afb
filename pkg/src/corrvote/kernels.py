"""Hot numeric kernels with a numba fast path and a pure-numpy fallback.

The Monte Carlo harness spends most of its time inside the spectral welfare:
for every candidate j it needs the eigenvalues of D_j G D_j, where G is the
Gram matrix of the agent embeddings and D_j = diag(sqrt of candidate j's
non-negative scores). Those eigenvalues equal the squared singular values of
the candidate's embedding-weighted score matrix, so one (n, n) symmetric
eigensolve per candidate replaces an (n, p) SVD with p up to ~1000.

Backend selection: the env var ``CORRVOTE_NUMBA`` set to 0/false/no/off
forces the numpy path; anything else (including unset) uses numba when it
imports. ``BACKEND`` records the choice. Both paths are kept test-equal;
``benchmarks/bench_kernels.py`` compares their throughput.
"""

from __future__ import annotations

import os

import numpy as np

_FALSey = {"0", "false", "no", "off"}


def _want_numba() -> bool:
    return os.environ.get("CORRVOTE_NUMBA", "auto").strip().lower() not in _FALSey


def _scaled_grams(gram: np.ndarray, sqrt_scores: np.ndarray) -> np.ndarray:
    """Stack of D_j G D_j over candidates j; shape (m, n, n)."""
    cols = sqrt_scores.T  # (m, n)
    return cols[:, :, None] * gram[None, :, :] * cols[:, None, :]


def _ev_log_welfare_numpy(
    gram: np.ndarray, sqrt_scores: np.ndarray, k_hat: int
) -> np.ndarray:
    eigs = np.linalg.eigvalsh(_scaled_grams(gram, sqrt_scores))
    top = eigs[:, -k_hat:]
    with np.errstate(divide="ignore", invalid="ignore"):
        logs = np.log(np.maximum(top, 0.0))
    return np.where((top > 0.0).all(axis=1), logs.sum(axis=1), -np.inf)


def _ev_log_welfare_python(
    gram: np.ndarray, sqrt_scores: np.ndarray, k_hat: int
) -> np.ndarray:
    # Loop body shared by the numba path; kept importable for the fallback
    # parity tests even when numba is disabled.
    n, m = sqrt_scores.shape
    out = np.empty(m)
    scaled = np.empty((n, n))
    for j in range(m):
        for r in range(n):
            sr = sqrt_scores[r, j]
            for c in range(n):
                scaled[r, c] = sr * gram[r, c] * sqrt_scores[c, j]
        eigs = np.linalg.eigvalsh(scaled)
        acc = 0.0
        for l in range(n - k_hat, n):
            w = eigs[l]
            if w <= 0.0:
                acc = -np.inf
                break
            acc += np.log(w)
        out[j] = acc
    return out


BACKEND = "numpy"
_ev_log_welfare_impl = _ev_log_welfare_numpy

if _want_numba():
    try:
        import numba

        _ev_log_welfare_numba = numba.njit(cache=True)(_ev_log_welfare_python)
        _ev_log_welfare_impl = _ev_log_welfare_numba
        BACKEND = "numba"
    except ImportError:  # pragma: no cover - numba is a hard dep, but stay usable
        pass


def ev_log_welfare(
    gram: np.ndarray, scores_nonneg: np.ndarray, k_hat: int
) -> np.ndarray:
    """Log of the product of the k_hat largest squared singular values.

    ``gram`` is the (n, n) embedding Gram matrix, ``scores_nonneg`` the
    (n, m) non-negative rescaled scores. Returns one log-welfare per
    candidate, with -inf when a zero eigenvalue lands inside the top k_hat.
    """
    n, m = scores_nonneg.shape
    k = int(min(max(k_hat, 1), n))
    if scores_nonneg.min() < 0:
        raise ValueError("spectral welfare needs non-negative scores")
    sqrt_scores = np.sqrt(scores_nonneg)
    return _ev_log_welfare_impl(
        np.ascontiguousarray(gram), np.ascontiguousarray(sqrt_scores), k
    )


def gram_squared_spectrum(embeddings: np.ndarray) -> np.ndarray:
    """Descending squared singular values of an (n, p) row matrix.

    Computed as eigenvalues of the (n, n) Gram matrix, clipped at zero,
    truncated to the min(n, p) values the rectangular matrix actually has.
    """
    emb = np.asarray(embeddings, dtype=np.float64)
    n, p = emb.shape
    eigs = np.linalg.eigvalsh(emb @ emb.T)[::-1]
    return np.maximum(eigs[: min(n, p)], 0.0)
