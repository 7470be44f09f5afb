"""Scenario config files: flat TOML with typed keys.

Example::

    embedding = "reference"   # or "cohesion", "absorption", "matrix"
    group_size = 20
    n_independent = 4
    sigma_d = 0.1
    sigma_f = 1.0
    m = 20
    m_train = 1000
    rules = ["rv", "ev", "ga"]
    trials = 10000
    seed = 42

Explicit embeddings use ``embedding = "matrix"`` with ``matrix = [[...], ...]``
(rows must have unit Euclidean norm). Unknown keys are rejected by name.
"""

from __future__ import annotations

import sys
from pathlib import Path

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .core import UsageError
from .experiments import (
    AbsorptionEmbedding,
    CohesionEmbedding,
    DEFAULT_SEED,
    EmbeddingSpec,
    ExplicitEmbedding,
    ReferenceEmbedding,
    ScenarioConfig,
)

_KNOWN_KEYS = {
    "embedding",
    "group_size",
    "n_independent",
    "alpha",
    "beta",
    "matrix",
    "sigma_d",
    "sigma_f",
    "m",
    "m_train",
    "rules",
    "trials",
    "seed",
    "share_training",
    "sa_agent",
}

_EMBEDDING_KINDS = ("reference", "cohesion", "absorption", "matrix")


def _require(data: dict, key: str, types: tuple[type, ...], kind: str) -> object:
    if key not in data:
        raise UsageError(f"embedding = {kind!r} requires key {key!r}")
    return _typed(data, key, types)


def _typed(data: dict, key: str, types: tuple[type, ...]) -> object:
    value = data[key]
    if isinstance(value, bool) and bool not in types:
        raise UsageError(f"key {key!r} has wrong type bool")
    if not isinstance(value, types):
        names = "/".join(t.__name__ for t in types)
        raise UsageError(f"key {key!r} must be {names}, got {type(value).__name__}")
    return value


def _embedding_from(data: dict) -> EmbeddingSpec:
    kind = data.get("embedding", "reference")
    if kind not in _EMBEDDING_KINDS:
        raise UsageError(
            f"embedding must be one of {list(_EMBEDDING_KINDS)}, got {kind!r}"
        )
    group = int(_typed(data, "group_size", (int,))) if "group_size" in data else 20
    indep = int(_typed(data, "n_independent", (int,))) if "n_independent" in data else 4
    if kind == "reference":
        return ReferenceEmbedding(group_size=group, n_independent=indep)
    if kind == "cohesion":
        alpha = float(_require(data, "alpha", (int, float), kind))
        return CohesionEmbedding(alpha=alpha, group_size=group, n_independent=indep)
    if kind == "absorption":
        beta = float(_require(data, "beta", (int, float), kind))
        return AbsorptionEmbedding(beta=beta, group_size=group, n_independent=indep)
    matrix = _require(data, "matrix", (list,), kind)
    rows = []
    for i, row in enumerate(matrix):
        if not isinstance(row, list) or not all(
            isinstance(x, (int, float)) and not isinstance(x, bool) for x in row
        ):
            raise UsageError(f"matrix row {i} must be a list of numbers")
        rows.append(tuple(float(x) for x in row))
    spec = ExplicitEmbedding(rows=tuple(rows))
    spec.build()  # surface unit-norm violations now, naming the row
    return spec


def config_from_dict(data: dict, default_seed: int = DEFAULT_SEED) -> ScenarioConfig:
    unknown = sorted(set(data) - _KNOWN_KEYS)
    if unknown:
        raise UsageError(f"unknown config key(s): {', '.join(unknown)}")
    embedding = _embedding_from(data)
    kwargs: dict = {"embedding": embedding, "master_seed": default_seed}
    if "sigma_d" in data:
        kwargs["sigma_d"] = float(_typed(data, "sigma_d", (int, float)))
    if "sigma_f" in data:
        kwargs["sigma_f"] = float(_typed(data, "sigma_f", (int, float)))
    if "m" in data:
        kwargs["m"] = int(_typed(data, "m", (int,)))
    if "m_train" in data:
        kwargs["m_train"] = int(_typed(data, "m_train", (int,)))
    if "trials" in data:
        kwargs["n_trials"] = int(_typed(data, "trials", (int,)))
    if "seed" in data:
        kwargs["master_seed"] = int(_typed(data, "seed", (int,)))
    if "share_training" in data:
        kwargs["share_training"] = bool(_typed(data, "share_training", (bool,)))
    if "sa_agent" in data:
        kwargs["sa_agent"] = int(_typed(data, "sa_agent", (int,)))
    if "rules" in data:
        names = _typed(data, "rules", (list,))
        if not all(isinstance(r, str) for r in names):
            raise UsageError("key 'rules' must be a list of rule-name strings")
        kwargs["rules"] = tuple(names)
    return ScenarioConfig(**kwargs)


def load_config(path: str | Path, default_seed: int = DEFAULT_SEED) -> ScenarioConfig:
    text = Path(path).read_bytes()
    try:
        data = tomllib.loads(text.decode("utf-8"))
    except tomllib.TOMLDecodeError as exc:
        raise UsageError(f"cannot parse {path}: {exc}") from exc
    return config_from_dict(data, default_seed=default_seed)
