"""Annotation diffing, pruning and hint retrieval for Dafny programs."""

from ._core import (
    Error,
    annotations,
    diff,
    bench,
    prune,
    retrieve,
    strip,
    tactics,
    tokenize,
    verify,
)

__all__ = [
    "Error",
    "annotations",
    "bench",
    "diff",
    "prune",
    "retrieve",
    "strip",
    "tactics",
    "tokenize",
    "verify",
]
