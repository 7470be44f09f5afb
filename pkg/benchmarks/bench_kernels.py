"""Throughput comparison: numba kernel vs the pure-numpy fallback.

Times the spectral welfare kernel (the harness hot spot) on realistic
shapes, plus one full reference-scenario trial loop under each backend.
Run directly::

    python benchmarks/bench_kernels.py [--repeats N]

Backends are selected the same way the library selects them: the numpy
path is what you get with CORRVOTE_NUMBA=0.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from corrvote import kernels
from corrvote.experiments import ReferenceEmbedding, ScenarioConfig, _collect_chunk


def _case(n: int, m: int, seed: int = 0):
    rng = np.random.default_rng(seed)
    emb = rng.standard_normal((n, max(n, m)))
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)
    gram = np.ascontiguousarray(emb @ emb.T)
    sqrt_scores = np.ascontiguousarray(np.sqrt(rng.uniform(0.0, 4.0, size=(n, m))))
    return gram, sqrt_scores


def time_fn(fn, *args, repeats: int) -> float:
    fn(*args)  # warm up (JIT compile, cache load)
    start = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - start) / repeats


def bench_kernel(repeats: int) -> None:
    print(f"active backend: {kernels.BACKEND}")
    print(f"{'shape':>14}  {'numpy ms':>9}  {'numba ms':>9}  {'speedup':>7}")
    for n, m in ((24, 20), (24, 50), (8, 20), (48, 20)):
        gram, sqrt_scores = _case(n, m)
        t_np = time_fn(kernels._ev_log_welfare_numpy, gram, sqrt_scores, 5, repeats=repeats)
        if kernels.BACKEND == "numba":
            t_nb = time_fn(
                kernels._ev_log_welfare_impl, gram, sqrt_scores, 5, repeats=repeats
            )
            print(
                f"{n:>6} x {m:<5}  {t_np * 1e3:9.3f}  {t_nb * 1e3:9.3f}"
                f"  {t_np / t_nb:6.2f}x"
            )
        else:
            print(f"{n:>6} x {m:<5}  {t_np * 1e3:9.3f}  {'n/a':>9}  {'n/a':>7}")


def bench_trials(repeats: int) -> None:
    config = ScenarioConfig(
        embedding=ReferenceEmbedding(),
        rules=("ga", "ml+", "ev+", "ev", "av", "np", "rv", "sa", "ml", "rw"),
        n_trials=50,
        master_seed=7,
    )
    per = time_fn(_collect_chunk, config, 0, 50, repeats=max(1, repeats // 10))
    print(
        f"full trial loop ({kernels.BACKEND}): {per / 50 * 1e3:.2f} ms/trial "
        f"(all 10 rules, 1000 training candidates)"
    )


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=200)
    args = parser.parse_args()
    bench_kernel(args.repeats)
    bench_trials(args.repeats)


if __name__ == "__main__":
    main()
