"""SPARQL query-dataset augmentation, rewriting, splitting and metrics."""

from ._core import (
    Error,
    Schema,
    STRATEGIES,
    bleu,
    canonicalize,
    evaluate_corpus,
    format_prompt,
    generate_dataset,
    meteor,
    read_dataset,
    rewrite,
    rouge_l,
    serialize,
    split_nested,
    token_f1,
    tokenize_query,
    write_dataset,
)

__all__ = [
    "Error",
    "Schema",
    "STRATEGIES",
    "bleu",
    "canonicalize",
    "evaluate_corpus",
    "format_prompt",
    "generate_dataset",
    "meteor",
    "read_dataset",
    "rewrite",
    "rouge_l",
    "serialize",
    "split_nested",
    "token_f1",
    "tokenize_query",
    "write_dataset",
]
