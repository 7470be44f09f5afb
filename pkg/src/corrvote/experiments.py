"""Monte Carlo harness: scenario configs, trial execution, sweeps, CSV output.

Determinism contract: every number in a result is a pure function of
(master_seed, config). Each trial draws from its own substream seeded by
(master_seed, trial_index); the problem is sampled before any training
columns and before any rule-level randomness, so it never depends on which
rules run. Trials are embarrassingly parallel; per-trial values are placed
into arrays by trial index and reduced in one fixed-order pass, so the
aggregate output is bit-identical for any worker count.

Within a trial every requested rule sees the identical problem (paired
evaluation), which is what makes per-rule differences meaningful at 10^4
trials.
"""

from __future__ import annotations

import dataclasses
import math
import multiprocessing
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from . import likelihood, noise, rules, spectral
from .core import UsageError, relative_utility, select_winner
from .preprocessing import concat_scores, standardize_rows

DEFAULT_SEED = 42

#: Substream tag for the optional scenario-shared training set; trial
#: indices are ordinary ints and can never collide with it.
_SHARED_TRAINING_STREAM = 0xFFFF_FFFF_FFFF_FFFF


# ---------------------------------------------------------------------------
# Scenario configuration


@dataclass(frozen=True)
class ReferenceEmbedding:
    group_size: int = 20
    n_independent: int = 4

    def build(self) -> np.ndarray:
        return noise.reference_embedding(self.group_size, self.n_independent)


@dataclass(frozen=True)
class CohesionEmbedding:
    alpha: float
    group_size: int = 20
    n_independent: int = 4

    def build(self) -> np.ndarray:
        return noise.cohesion_embedding(self.alpha, self.group_size, self.n_independent)


@dataclass(frozen=True)
class AbsorptionEmbedding:
    beta: float
    group_size: int = 20
    n_independent: int = 4

    def build(self) -> np.ndarray:
        return noise.absorption_embedding(self.beta, self.group_size, self.n_independent)


@dataclass(frozen=True)
class ExplicitEmbedding:
    rows: tuple[tuple[float, ...], ...]

    def build(self) -> np.ndarray:
        return noise.validate_embedding(np.asarray(self.rows, dtype=np.float64))


EmbeddingSpec = (
    ReferenceEmbedding | CohesionEmbedding | AbsorptionEmbedding | ExplicitEmbedding
)


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything that determines one Monte Carlo experiment."""

    embedding: EmbeddingSpec = field(default_factory=ReferenceEmbedding)
    sigma_d: float = 0.1
    sigma_f: float = 1.0
    m: int = 20
    m_train: int = 1000
    rules: tuple[str, ...] = rules.RULE_NAMES
    n_trials: int = 10000
    master_seed: int = DEFAULT_SEED
    share_training: bool = False
    sa_agent: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "rules", tuple(self.rules))
        unknown = [r for r in self.rules if r not in rules.RULE_NAMES]
        if unknown:
            raise UsageError(
                f"unknown rule name(s) {unknown}; known: {list(rules.RULE_NAMES)}"
            )
        if not self.rules:
            raise UsageError("at least one rule is required")
        if self.n_trials < 1:
            raise UsageError("n_trials must be at least 1")
        if self.m < 2:
            raise UsageError("need at least 2 candidates per choice")
        if self.m_train < 0:
            raise UsageError("m_train must be non-negative")
        if self.sigma_d < 0 or self.sigma_f < 0:
            raise UsageError("noise intensities must be non-negative")

    @property
    def noise_params(self) -> noise.NoiseParams:
        return noise.NoiseParams(sigma_d=self.sigma_d, sigma_f=self.sigma_f)

    @property
    def needs_training(self) -> bool:
        return self.m_train > 0 and any(r in rules.TRAINED_RULES for r in self.rules)


# ---------------------------------------------------------------------------
# Trial execution


class _ScenarioContext:
    """Per-scenario constants shared by all trials."""

    def __init__(self, config: ScenarioConfig):
        self.embedding = config.embedding.build()
        self.params = config.noise_params
        if "sa" in config.rules and not 0 <= config.sa_agent < self.embedding.shape[0]:
            raise UsageError(
                f"sa_agent {config.sa_agent} out of range for "
                f"{self.embedding.shape[0]} agents"
            )
        self.ga_weights = None
        self.ga_fallback = False
        if "ga" in config.rules:
            raw = likelihood.weights_from_covariance(
                noise.model_covariance(self.embedding, self.params)
            )
            self.ga_weights, self.ga_fallback = likelihood.uniform_fallback(raw)
        self.shared_training = None
        if config.share_training and config.needs_training:
            rng = np.random.default_rng(
                np.random.SeedSequence((config.master_seed, _SHARED_TRAINING_STREAM))
            )
            _, self.shared_training = noise.sample_scores(
                self.embedding, self.params, config.m_train, rng
            )


@dataclass(frozen=True)
class TrialResult:
    """Per-rule outcome of one trial on one shared problem."""

    relative_utility: dict[str, float]
    accurate: dict[str, bool]
    fallback: dict[str, bool]
    k_hat: dict[str, int]
    negative_weights: dict[str, bool]


def _evaluate_rules(
    config: ScenarioConfig,
    ctx: _ScenarioContext,
    utilities: np.ndarray,
    scores: np.ndarray,
    training: np.ndarray | None,
    aux_rng: np.random.Generator,
) -> TrialResult:
    requested = config.rules
    z = None
    if any(r != "rw" and r not in rules.TRAINED_RULES for r in requested):
        z = standardize_rows(scores)
    zcat = None
    if any(r in rules.TRAINED_RULES for r in requested):
        if training is None:
            zcat = z if z is not None else standardize_rows(scores)
        else:
            zcat = standardize_rows(concat_scores(scores, training))

    m = scores.shape[1]
    winners: dict[str, int] = {}
    fallback: dict[str, bool] = {}
    k_hat: dict[str, int] = {}
    neg_weights: dict[str, bool] = {}

    for rule in requested:
        if rule == "rv":
            winners[rule] = select_winner(rules.welfare_range(z))
        elif rule == "av":
            winners[rule] = rules.approval_winner(z)[1]
        elif rule == "np":
            winners[rule] = select_winner(rules.welfare_nash(z))
        elif rule == "sa":
            winners[rule] = select_winner(z[config.sa_agent])
        elif rule == "rw":
            winners[rule] = int(aux_rng.integers(m))
        elif rule == "ga":
            winners[rule] = select_winner(likelihood.ml_estimate(z, ctx.ga_weights))
            fallback[rule] = ctx.ga_fallback
            neg_weights[rule] = bool((ctx.ga_weights.weights < 0).any())
        elif rule in ("ml", "ml+"):
            basis = zcat if rule == "ml+" else z
            outcome, weights, fell = likelihood.weighted_outcome(basis, basis[:, :m])
            winners[rule] = outcome.winner
            fallback[rule] = fell
            neg_weights[rule] = bool((weights.weights < 0).any())
        elif rule in ("ev", "ev+"):
            basis = zcat if rule == "ev+" else z
            emb = basis / math.sqrt(basis.shape[1])
            diag = spectral.estimate_k(emb)
            nonneg = np.maximum(basis[:, :m] + 2.0, 0.0)
            welfare = spectral.ev_welfare(nonneg, emb, diag.k_hat)
            winners[rule] = select_winner(welfare)
            k_hat[rule] = diag.k_hat

    best = int(np.argmax(utilities))
    return TrialResult(
        relative_utility={r: relative_utility(utilities, w) for r, w in winners.items()},
        accurate={r: w == best for r, w in winners.items()},
        fallback=fallback,
        k_hat=k_hat,
        negative_weights=neg_weights,
    )


def _run_trial(
    config: ScenarioConfig, ctx: _ScenarioContext, trial_index: int
) -> TrialResult:
    problem_ss, aux_ss = np.random.SeedSequence(
        (config.master_seed, trial_index)
    ).spawn(2)
    rng = np.random.default_rng(problem_ss)
    utilities, scores = noise.sample_scores(ctx.embedding, ctx.params, config.m, rng)
    training = None
    if config.needs_training:
        if config.share_training:
            training = ctx.shared_training
        else:
            _, training = noise.sample_scores(
                ctx.embedding, ctx.params, config.m_train, rng
            )
    return _evaluate_rules(
        config, ctx, utilities, scores, training, np.random.default_rng(aux_ss)
    )


def run_trial(config: ScenarioConfig, trial_index: int) -> TrialResult:
    """Run one trial standalone; the harness-internal path gives identical results."""
    return _run_trial(config, _ScenarioContext(config), trial_index)


# ---------------------------------------------------------------------------
# Aggregation


@dataclass(frozen=True)
class RuleStats:
    mean_relative_utility: float
    std_error: float
    accuracy: float
    fallback_count: int


@dataclass(frozen=True)
class SweepResult:
    """One parameter point: per-rule means, errors, and diagnostics."""

    sweep_id: str
    parameter: str
    value: float | int
    n_trials: int
    seed: int
    rules: tuple[str, ...]
    stats: dict[str, RuleStats]
    k_hat_counts: dict[str, dict[int, int]] = field(default_factory=dict)
    negative_weight_counts: dict[str, int] = field(default_factory=dict)


def _collect_chunk(
    config: ScenarioConfig, start: int, stop: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Per-trial values for trials [start, stop); rows ordered by trial index."""
    ctx = _ScenarioContext(config)
    names = config.rules
    count = stop - start
    rel = np.empty((count, len(names)))
    acc = np.empty((count, len(names)), dtype=bool)
    fall = np.zeros((count, len(names)), dtype=bool)
    khat = np.zeros((count, len(names)), dtype=np.int16)
    negw = np.zeros((count, len(names)), dtype=bool)
    for row, trial in enumerate(range(start, stop)):
        result = _run_trial(config, ctx, trial)
        for col, name in enumerate(names):
            rel[row, col] = result.relative_utility[name]
            acc[row, col] = result.accurate[name]
            fall[row, col] = result.fallback.get(name, False)
            khat[row, col] = result.k_hat.get(name, 0)
            negw[row, col] = result.negative_weights.get(name, False)
    return rel, acc, fall, khat, negw


def _worker(args: tuple[ScenarioConfig, int, int]):
    config, start, stop = args
    return start, _collect_chunk(config, start, stop)


def run_scenario(
    config: ScenarioConfig,
    workers: int = 1,
    sweep_id: str = "scenario",
    parameter: str = "none",
    value: float | int = 0,
) -> SweepResult:
    """Mean relative utility with standard error over config.n_trials trials."""
    n = config.n_trials
    if workers <= 1 or n < 2 * workers:
        chunks = [(0, _collect_chunk(config, 0, n))]
    else:
        step = max(1, math.ceil(n / (workers * 4)))
        jobs = [(config, s, min(s + step, n)) for s in range(0, n, step)]
        with multiprocessing.get_context("fork").Pool(workers) as pool:
            chunks = pool.map(_worker, jobs)
        chunks.sort(key=lambda item: item[0])

    rel = np.concatenate([c[1][0] for c in chunks], axis=0)
    acc = np.concatenate([c[1][1] for c in chunks], axis=0)
    fall = np.concatenate([c[1][2] for c in chunks], axis=0)
    khat = np.concatenate([c[1][3] for c in chunks], axis=0)
    negw = np.concatenate([c[1][4] for c in chunks], axis=0)

    stats: dict[str, RuleStats] = {}
    k_counts: dict[str, dict[int, int]] = {}
    negw_counts: dict[str, int] = {}
    for col, name in enumerate(config.rules):
        column = rel[:, col]
        err = float(column.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0
        stats[name] = RuleStats(
            mean_relative_utility=float(column.mean()),
            std_error=err,
            accuracy=float(acc[:, col].mean()),
            fallback_count=int(fall[:, col].sum()),
        )
        if name in ("ev", "ev+"):
            values, counts = np.unique(khat[:, col], return_counts=True)
            k_counts[name] = {int(v): int(c) for v, c in zip(values, counts)}
        if name in ("ga", "ml", "ml+"):
            negw_counts[name] = int(negw[:, col].sum())
    return SweepResult(
        sweep_id=sweep_id,
        parameter=parameter,
        value=value,
        n_trials=n,
        seed=config.master_seed,
        rules=config.rules,
        stats=stats,
        k_hat_counts=k_counts,
        negative_weight_counts=negw_counts,
    )


# ---------------------------------------------------------------------------
# Sweeps and the figure catalog

SWEEP_PARAMETERS = (
    "group_size",
    "n_independent",
    "m",
    "sigma_d",
    "sigma_f",
    "alpha",
    "beta",
)


def _config_at(base: ScenarioConfig, parameter: str, value: float | int) -> ScenarioConfig:
    if parameter in ("group_size", "n_independent"):
        emb = base.embedding
        if not isinstance(emb, (ReferenceEmbedding, CohesionEmbedding, AbsorptionEmbedding)):
            raise UsageError(f"cannot sweep {parameter} over an explicit embedding")
        return dataclasses.replace(
            base, embedding=dataclasses.replace(emb, **{parameter: int(value)})
        )
    if parameter in ("alpha", "beta"):
        emb = base.embedding
        group = getattr(emb, "group_size", 20)
        indep = getattr(emb, "n_independent", 4)
        if parameter == "alpha":
            new = CohesionEmbedding(alpha=float(value), group_size=group, n_independent=indep)
        else:
            new = AbsorptionEmbedding(beta=float(value), group_size=group, n_independent=indep)
        return dataclasses.replace(base, embedding=new)
    if parameter == "m":
        return dataclasses.replace(base, m=int(value))
    if parameter in ("sigma_d", "sigma_f"):
        return dataclasses.replace(base, **{parameter: float(value)})
    raise UsageError(
        f"unknown sweep parameter {parameter!r}; known: {list(SWEEP_PARAMETERS)}"
    )


def sweep(
    base: ScenarioConfig,
    parameter: str,
    values: Sequence[float | int],
    workers: int = 1,
    sweep_id: str = "sweep",
) -> list[SweepResult]:
    """One scenario per value, all other parameters held at ``base``."""
    return [
        run_scenario(
            _config_at(base, parameter, v),
            workers=workers,
            sweep_id=sweep_id,
            parameter=parameter,
            value=v,
        )
        for v in values
    ]


#: Rules drawn in the paper's sweep figures (the bar figure adds "rw").
SWEEP_RULES = ("ga", "ml+", "ev+", "ev", "av", "np", "rv", "sa", "ml")

FIGURE_GRIDS: dict[str, tuple[str, tuple[float | int, ...]]] = {
    "fig2": ("group_size", (1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20, 22, 24, 26, 28, 30)),
    "fig3": ("n_independent", (0, 1, 2, 4, 6, 8, 10, 12, 14, 16, 18, 20)),
    "fig4": ("m", (2, 3, 4, 5, 10, 15, 20, 25, 30, 35, 40, 45, 50)),
    "fig6a": ("alpha", tuple(round(0.1 * i, 1) for i in range(11))),
    "fig6b": ("beta", tuple(round(0.1 * i, 1) for i in range(11))),
}

NOISE_GRID = (0.1, 1.0, 10.0)

FIGURE_IDS = ("fig1", "fig2", "fig3", "fig4", "fig5", "fig6a", "fig6b")


def reproduce_figure(
    figure_id: str,
    trials: int = 10000,
    seed: int = DEFAULT_SEED,
    workers: int = 1,
) -> list[SweepResult]:
    """All parameter points behind one paper figure, at full trial count."""
    if figure_id not in FIGURE_IDS:
        raise UsageError(f"unknown figure id {figure_id!r}; known: {list(FIGURE_IDS)}")
    base = ScenarioConfig(n_trials=trials, master_seed=seed, rules=SWEEP_RULES)
    if figure_id == "fig1":
        config = dataclasses.replace(base, rules=rules.RULE_NAMES)
        return [run_scenario(config, workers=workers, sweep_id="fig1")]
    if figure_id == "fig5":
        results: list[SweepResult] = []
        for sigma_d in NOISE_GRID:
            slice_base = dataclasses.replace(base, sigma_d=sigma_d)
            results.extend(
                sweep(
                    slice_base,
                    "sigma_f",
                    NOISE_GRID,
                    workers=workers,
                    sweep_id=f"fig5[sigma_d={sigma_d:g}]",
                )
            )
        return results
    parameter, values = FIGURE_GRIDS[figure_id]
    return sweep(base, parameter, values, workers=workers, sweep_id=figure_id)


# ---------------------------------------------------------------------------
# CSV output

CSV_HEADER = (
    "sweep_id,parameter,value,rule,n_trials,"
    "mean_relative_utility,std_error,accuracy,fallback_count,seed"
)

DIAGNOSTICS_HEADER = "sweep_id,parameter,value,rule,metric,key,count"


def _fmt(x: float | int) -> str:
    return repr(x) if isinstance(x, float) else str(x)


def render_csv(results: Iterable[SweepResult]) -> str:
    lines = [CSV_HEADER]
    for res in results:
        for name in res.rules:
            st = res.stats[name]
            lines.append(
                ",".join(
                    (
                        res.sweep_id,
                        res.parameter,
                        _fmt(res.value),
                        name,
                        str(res.n_trials),
                        _fmt(st.mean_relative_utility),
                        _fmt(st.std_error),
                        _fmt(st.accuracy),
                        str(st.fallback_count),
                        str(res.seed),
                    )
                )
            )
    return "\n".join(lines) + "\n"


def render_diagnostics_csv(results: Iterable[SweepResult]) -> str:
    lines = [DIAGNOSTICS_HEADER]
    for res in results:
        prefix = f"{res.sweep_id},{res.parameter},{_fmt(res.value)}"
        for name, counts in res.k_hat_counts.items():
            for k, count in sorted(counts.items()):
                lines.append(f"{prefix},{name},k_hat,{k},{count}")
        for name, count in res.negative_weight_counts.items():
            lines.append(f"{prefix},{name},negative_weights,,{count}")
    return "\n".join(lines) + "\n"
