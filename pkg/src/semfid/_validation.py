"""Input validation helpers for the estimator API."""

import numbers
import os

import numpy as np

from semfid.embeddings import EmbeddingTable, load_embeddings
from semfid.linguistics import NounLexicon, default_lexicon, load_lexicon
from semfid.sf import check_count_mode

__all__ = [
    "check_caption_pairs",
    "check_count_mode",
    "check_lexicon",
    "check_probability",
    "check_series",
    "check_table",
]


def check_probability(value, name):
    if not isinstance(value, numbers.Real) or isinstance(value, bool):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {value}")
    return float(value)


def check_table(embeddings):
    if isinstance(embeddings, EmbeddingTable):
        return embeddings
    if isinstance(embeddings, (str, os.PathLike)):
        with open(embeddings, "rb") as fh:
            return load_embeddings(fh, name=os.fspath(embeddings))
    if isinstance(embeddings, dict):
        return EmbeddingTable.from_dict(embeddings)
    raise TypeError("embeddings must be an EmbeddingTable, a mapping, or a path")


def check_lexicon(lexicon, stop_nouns=None):
    if lexicon is None:
        lexicon = default_lexicon()
    elif isinstance(lexicon, (str, os.PathLike)):
        with open(lexicon, "rb") as fh:
            lexicon = load_lexicon(fh)
    elif not isinstance(lexicon, NounLexicon):
        lexicon = NounLexicon(frozenset(lexicon))
    if stop_nouns is not None:
        lexicon = NounLexicon(lexicon.nouns, frozenset(stop_nouns))
    return lexicon


def check_caption_pairs(X):
    """Validate ``X`` as a sequence of ``(caption, labels[, confidences])`` rows."""
    rows = []
    for i, row in enumerate(X):
        if len(row) not in (2, 3):
            raise ValueError(f"row {i}: expected (caption, labels[, confidences])")
        caption, labels = row[0], row[1]
        confidences = row[2] if len(row) == 3 else None
        if not isinstance(caption, str):
            raise TypeError(f"row {i}: caption must be a string")
        if isinstance(labels, str):
            raise TypeError(f"row {i}: labels must be a sequence of strings, not a string")
        labels = tuple(labels)
        if confidences is not None:
            confidences = tuple(float(c) for c in confidences)
        rows.append((caption, labels, confidences))
    if not rows:
        raise ValueError("X is empty")
    return rows


def check_series(X):
    """Accept a 1-D series or a single-column 2-D array."""
    arr = np.asarray(X, dtype=np.float64)
    if arr.ndim == 2 and arr.shape[1] == 1:
        arr = arr[:, 0]
    if arr.ndim != 1:
        raise ValueError(f"expected a 1-D series or one column, got shape {arr.shape}")
    return arr
