"""Score aggregation for choice problems with correlated noisy estimators.

Rules (canonical names): range voting "rv", approval voting "av", Nash
product "np", single agent "sa", random winner "rw", embedded voting "ev"
and its trained variant "ev+", the observational maximum-likelihood rule
"ml"/"ml+", and the model-aware weighted average "ga". A Monte Carlo
harness samples synthetic choice problems from an embedding-based Gaussian
noise model and measures each rule's average relative utility.
"""

from .core import (
    AggregationOutcome,
    ChoiceProblem,
    UsageError,
    relative_utility,
    select_winner,
)
from .noise import (
    NoiseParams,
    absorption_embedding,
    cohesion_embedding,
    model_covariance,
    reference_embedding,
    sample_problem,
    validate_embedding,
)
from .preprocessing import compute_embeddings, shift_to_positive, standardize_rows
from .rules import (
    RULE_NAMES,
    TRAINED_RULES,
    approval_voting,
    nash_product,
    random_winner,
    range_voting,
    single_agent,
)
from .spectral import (
    SpectralDiagnostics,
    candidate_matrix,
    embedded_voting,
    estimate_k,
    ev_welfare,
)
from .likelihood import (
    WeightVector,
    empirical_covariance,
    ga_rule,
    ml_estimate,
    ml_rule,
    weights_from_covariance,
)
from .experiments import (
    AbsorptionEmbedding,
    CohesionEmbedding,
    ExplicitEmbedding,
    ReferenceEmbedding,
    ScenarioConfig,
    SweepResult,
    reproduce_figure,
    run_scenario,
    run_trial,
    sweep,
)

__version__ = "0.1.0"

__all__ = [
    "AggregationOutcome",
    "ChoiceProblem",
    "UsageError",
    "relative_utility",
    "select_winner",
    "NoiseParams",
    "absorption_embedding",
    "cohesion_embedding",
    "model_covariance",
    "reference_embedding",
    "sample_problem",
    "validate_embedding",
    "compute_embeddings",
    "shift_to_positive",
    "standardize_rows",
    "RULE_NAMES",
    "TRAINED_RULES",
    "approval_voting",
    "nash_product",
    "random_winner",
    "range_voting",
    "single_agent",
    "SpectralDiagnostics",
    "candidate_matrix",
    "embedded_voting",
    "estimate_k",
    "ev_welfare",
    "WeightVector",
    "empirical_covariance",
    "ga_rule",
    "ml_estimate",
    "ml_rule",
    "weights_from_covariance",
    "AbsorptionEmbedding",
    "CohesionEmbedding",
    "ExplicitEmbedding",
    "ReferenceEmbedding",
    "ScenarioConfig",
    "SweepResult",
    "reproduce_figure",
    "run_scenario",
    "run_trial",
    "sweep",
    "__version__",
]
