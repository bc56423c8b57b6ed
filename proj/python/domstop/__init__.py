"""Domain-specific stop word extraction by distance from a class-separating hyperplane."""

import json

from ._domstop import (
    Corpus,
    DataError,
    EmbeddingModel,
    Error,
    SynthConfig,
    TrainConfig,
    UsageError,
    Vocabulary,
    build_corpus,
    chi2_score,
    cross_validate,
    embedding_of,
    generate,
    load_corpus,
    load_model,
    mi_score,
    overlap,
    rank,
    save_model,
    tokenize,
    train_skipgram,
)
from ._domstop import evaluate_json as _evaluate_json


def evaluate(corpus, grid=None, model=None, jobs=1, include_timing=True):
    """Run an elimination grid; ``grid`` uses the same keys as the CLI config file."""
    report = _evaluate_json(corpus, json.dumps(grid or {}), model, jobs, include_timing)
    return json.loads(report)


__all__ = [
    "Corpus",
    "DataError",
    "EmbeddingModel",
    "Error",
    "SynthConfig",
    "TrainConfig",
    "UsageError",
    "Vocabulary",
    "build_corpus",
    "chi2_score",
    "cross_validate",
    "embedding_of",
    "evaluate",
    "generate",
    "load_corpus",
    "load_model",
    "mi_score",
    "overlap",
    "rank",
    "save_model",
    "tokenize",
    "train_skipgram",
]
