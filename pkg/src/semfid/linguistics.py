"""Caption tokenization and lexicon-based noun extraction."""

import re
import string
from dataclasses import dataclass
from importlib import resources

from semfid._io import iter_text_lines
from semfid.errors import EmptyLexicon

_PUNCT = string.punctuation
_LABEL_SPLIT = re.compile(r"[\s_\-]+")

#: Positional nouns that never count as objects ("in front of", "in the middle of").
DEFAULT_STOP_NOUNS = frozenset({"front", "middle", "top", "side", "bottom"})


@dataclass(frozen=True)
class CaptionRecord:
    image_id: str
    model_id: str
    text: str

    def __post_init__(self):
        if not self.image_id:
            raise ValueError("image_id must be nonempty")
        if not self.model_id:
            raise ValueError("model_id must be nonempty")


@dataclass(frozen=True)
class NounExtraction:
    noun_tokens: tuple
    distinct_nouns: tuple


@dataclass(frozen=True)
class NounLexicon:
    nouns: frozenset
    stop_nouns: frozenset = DEFAULT_STOP_NOUNS

    def __post_init__(self):
        object.__setattr__(self, "nouns", frozenset(w.lower() for w in self.nouns))
        object.__setattr__(self, "stop_nouns", frozenset(w.lower() for w in self.stop_nouns))

    def __contains__(self, token):
        return token in self.nouns and token not in self.stop_nouns


def tokenize(text):
    """Split on whitespace, strip edge punctuation, lowercase, drop empties.

    >>> tokenize("wii remote.")
    ['wii', 'remote']
    """
    tokens = (tok.strip(_PUNCT).lower() for tok in text.split())
    return [tok for tok in tokens if tok]


def extract_nouns(tokens, lexicon):
    noun_tokens = tuple(tok for tok in tokens if tok in lexicon)
    return NounExtraction(noun_tokens, tuple(dict.fromkeys(noun_tokens)))


def normalize_label(label):
    """Turn a detector class label into embeddable lowercase tokens.

    "Cellular Telephone" and "cellular_telephone" both map to
    ``['cellular', 'telephone']``.
    """
    parts = (part.strip(_PUNCT) for part in _LABEL_SPLIT.split(label.lower()))
    return [part for part in parts if part]


def _read_words(source):
    words = set()
    for _, line in iter_text_lines(source):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        words.add(line.lower())
    return words


def load_lexicon(nouns_source, stop_source=None):
    """Build a :class:`NounLexicon` from word-per-line sources.

    ``stop_source`` replaces :data:`DEFAULT_STOP_NOUNS` when given.
    """
    nouns = _read_words(nouns_source)
    if not nouns:
        raise EmptyLexicon("noun lexicon is empty")
    stop = DEFAULT_STOP_NOUNS if stop_source is None else frozenset(_read_words(stop_source))
    return NounLexicon(frozenset(nouns), frozenset(stop))


def default_lexicon(stop_source=None):
    """The small bundled English noun list (common photo/scene nouns)."""
    data = resources.files("semfid").joinpath("data/nouns.txt").read_bytes()
    return load_lexicon(data, stop_source)
