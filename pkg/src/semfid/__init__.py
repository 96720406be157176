"""Reference-free Semantic Fidelity (SF) scoring for image captions.

SF compares the nouns of a generated caption with the object classes an
object detector finds in the same image: the cosine similarity of their mean
word embeddings, scaled by the ratio of caption nouns to detected objects.
"""

from semfid.detections import DetectionSet, ObjectTermSet, parse_detections, to_term_set
from semfid.embeddings import EmbeddingTable, cosine, load_embeddings
from semfid.estimator import FidelityValidator, SemanticFidelity
from semfid.linguistics import CaptionRecord, NounLexicon, default_lexicon, load_lexicon
from semfid.sf import HSFResult, SFResult, Status, hsf, score_caption, select_best
from semfid.stats import CorrelationReport, aggregate, linear_fit, pearson, reg_incomplete_beta

__version__ = "0.1.0"

__all__ = [
    "CaptionRecord",
    "CorrelationReport",
    "DetectionSet",
    "EmbeddingTable",
    "FidelityValidator",
    "HSFResult",
    "NounLexicon",
    "ObjectTermSet",
    "SFResult",
    "SemanticFidelity",
    "Status",
    "aggregate",
    "cosine",
    "default_lexicon",
    "hsf",
    "linear_fit",
    "load_embeddings",
    "load_lexicon",
    "parse_detections",
    "pearson",
    "reg_incomplete_beta",
    "score_caption",
    "select_best",
    "to_term_set",
]
