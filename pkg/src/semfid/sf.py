"""Semantic Fidelity scoring.

For a caption with noun set N and a detector output with object set O::

    SF = s * (#N / #O)

where ``s`` is the cosine between the mean embedding of the caption nouns
and the mean embedding of the detected objects, clamped to [0, 1].

Degenerate cases map to a status instead of an error:

=================  ===================  ===========
status             condition            sf
=================  ===================  ===========
``Full``           0 < #N <= #O         s * #N/#O
``SimilarityOnly`` #N > #O > 0          s
``NoNouns``        #N = 0 < #O          0
``Undefined``      #O = 0               absent
=================  ===================  ===========
"""

import enum
from dataclasses import dataclass
from typing import NamedTuple, Optional

from semfid.embeddings import cosine, set_mean_vector
from semfid.errors import MixedImageIds, ZeroGroundTruthObjects
from semfid.linguistics import extract_nouns, tokenize

COUNT_MODES = ("distinct", "instances")


class Status(str, enum.Enum):
    FULL = "Full"
    SIMILARITY_ONLY = "SimilarityOnly"
    NO_NOUNS = "NoNouns"
    UNDEFINED = "Undefined"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class SFResult:
    image_id: str
    model_id: str
    similarity: float
    n_count: int
    o_count: int
    sf: Optional[float]
    status: Status
    oov_nouns: int = 0
    oov_objects: int = 0
    raw_cosine: float = 0.0
    degenerate: bool = False
    detector_id: Optional[str] = None

    def format_sf(self, undefined="--"):
        return undefined if self.sf is None else f"{self.sf:.2f}"


@dataclass(frozen=True)
class HSFResult:
    image_id: str
    n_count: int
    gt_object_count: int
    hsf: float

    @property
    def exceeds_one(self):
        """True when the caption names more objects than the ground truth holds."""
        return self.hsf > 1.0


class Similarity(NamedTuple):
    value: float
    raw_cosine: float
    oov_nouns: int
    oov_objects: int
    degenerate: bool


def _as_terms(items):
    return [(item,) if isinstance(item, str) else tuple(item) for item in items]


def _unresolved(table, terms):
    return sum(1 for term in terms if not any(tok.lower() in table.index for tok in term))


def semantic_similarity(nouns, objects, table):
    """Clamped cosine between the mean noun vector and the mean object vector.

    ``nouns`` and ``objects`` are sequences of terms; a term is a string or a
    sequence of tokens. When either side has no resolvable term the value is
    0 and ``degenerate`` is set.
    """
    noun_terms = _as_terms(nouns)
    object_terms = _as_terms(objects)
    oov_n = _unresolved(table, noun_terms)
    oov_o = _unresolved(table, object_terms)
    a = set_mean_vector(table, noun_terms)
    b = set_mean_vector(table, object_terms)
    if a is None or b is None:
        return Similarity(0.0, 0.0, oov_n, oov_o, True)
    raw = cosine(a, b)
    return Similarity(min(max(raw, 0.0), 1.0), raw, oov_n, oov_o, False)


def fidelity(similarity, n_count, o_count):
    """Apply the count ratio and the fallbacks; returns ``(sf, status)``."""
    if o_count == 0:
        return None, Status.UNDEFINED
    if n_count == 0:
        return 0.0, Status.NO_NOUNS
    if n_count > o_count:
        return similarity, Status.SIMILARITY_ONLY
    return similarity * (n_count / o_count), Status.FULL


def check_count_mode(count_mode):
    if count_mode == "tokens":
        count_mode = "instances"
    if count_mode not in COUNT_MODES:
        raise ValueError(f"count_mode must be one of {COUNT_MODES}, got {count_mode!r}")
    return count_mode


def score_caption(caption, detections, table, lexicon, count_mode="distinct", detector_id=None):
    """Score one caption against one image's :class:`ObjectTermSet`.

    The similarity always uses the distinct noun and object sets; only the
    counts #N and #O depend on ``count_mode``.
    """
    count_mode = check_count_mode(count_mode)
    nouns = extract_nouns(tokenize(caption.text), lexicon)
    sim = semantic_similarity(nouns.distinct_nouns, detections.distinct_labels, table)
    if count_mode == "distinct":
        n_count, o_count = len(nouns.distinct_nouns), len(detections.distinct_labels)
    else:
        n_count, o_count = len(nouns.noun_tokens), detections.instance_count
    sf, status = fidelity(sim.value, n_count, o_count)
    return SFResult(
        image_id=caption.image_id,
        model_id=caption.model_id,
        similarity=sim.value,
        n_count=n_count,
        o_count=o_count,
        sf=sf,
        status=status,
        oov_nouns=sim.oov_nouns,
        oov_objects=sim.oov_objects,
        raw_cosine=sim.raw_cosine,
        degenerate=sim.degenerate,
        detector_id=detector_id,
    )


def hsf(n_count, gt_object_count, image_id=""):
    """Human-grounded fidelity ``#N / #O_GT``; deliberately not clamped."""
    if gt_object_count <= 0:
        raise ZeroGroundTruthObjects(f"image {image_id!r} has no ground-truth objects")
    if n_count < 0:
        raise ValueError("n_count must be nonnegative")
    return HSFResult(image_id, n_count, gt_object_count, n_count / gt_object_count)


def select_best(results):
    """Highest-sf result for one image; ties go to the smallest ``model_id``."""
    results = list(results)
    if len({r.image_id for r in results}) > 1:
        raise MixedImageIds(sorted({r.image_id for r in results}))
    scored = [r for r in results if r.sf is not None]
    if not scored:
        return None
    return min(scored, key=lambda r: (-r.sf, r.model_id))
