"""scikit-learn style wrappers around the scoring and validation code."""

import numpy as np
from sklearn.base import BaseEstimator, RegressorMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from semfid._validation import (
    check_caption_pairs,
    check_count_mode,
    check_lexicon,
    check_probability,
    check_series,
    check_table,
)
from semfid.detections import DetectionSet, to_term_set
from semfid.linguistics import CaptionRecord
from semfid.sf import score_caption
from semfid.stats import correlation_report


class SemanticFidelity(TransformerMixin, BaseEstimator):
    """Reference-free caption scorer.

    Parameters
    ----------
    embeddings : EmbeddingTable, mapping or path
        Word vectors. A path is loaded as a text vector file at ``fit``.
    lexicon : NounLexicon, iterable of words, path or None
        Nouns kept from captions. ``None`` uses the bundled list.
    stop_nouns : iterable of str or None
        Overrides the lexicon's stop nouns when given.
    count_mode : {"distinct", "instances"}
        Count distinct nouns/classes, or every noun token/detection.
    min_confidence : float
        Detections below this confidence are dropped.

    ``transform`` takes rows of ``(caption, labels)`` or
    ``(caption, labels, confidences)`` and returns the columns of
    :attr:`feature_names`; ``sf`` is NaN where it is undefined.
    """

    feature_names = ("sf", "similarity", "n_count", "o_count")

    def __init__(
        self,
        embeddings=None,
        lexicon=None,
        stop_nouns=None,
        count_mode="distinct",
        min_confidence=0.0,
    ):
        self.embeddings = embeddings
        self.lexicon = lexicon
        self.stop_nouns = stop_nouns
        self.count_mode = count_mode
        self.min_confidence = min_confidence

    def fit(self, X=None, y=None):
        if self.embeddings is None:
            raise ValueError("embeddings must be given")
        self.table_ = check_table(self.embeddings)
        self.lexicon_ = check_lexicon(self.lexicon, self.stop_nouns)
        self.count_mode_ = check_count_mode(self.count_mode)
        self.min_confidence_ = check_probability(self.min_confidence, "min_confidence")
        return self

    def score_records(self, X):
        """Full :class:`SFResult` for every row of ``X``."""
        check_is_fitted(self, "table_")
        out = []
        for i, (caption, labels, confidences) in enumerate(check_caption_pairs(X)):
            image_id = str(i)
            terms = to_term_set(DetectionSet(image_id, labels, confidences), self.min_confidence_)
            out.append(
                score_caption(
                    CaptionRecord(image_id, "-", caption),
                    terms,
                    self.table_,
                    self.lexicon_,
                    self.count_mode_,
                )
            )
        return out

    def transform(self, X):
        results = self.score_records(X)
        return np.array(
            [
                [np.nan if r.sf is None else r.sf, r.similarity, r.n_count, r.o_count]
                for r in results
            ],
            dtype=np.float64,
        )

    def score_samples(self, X):
        return self.transform(X)[:, 0]

    def get_feature_names_out(self, input_features=None):
        return np.asarray(self.feature_names, dtype=object)


class FidelityValidator(RegressorMixin, BaseEstimator):
    """Linear fit of a human reference score (y) on SF (X).

    ``fit`` stores the full :class:`CorrelationReport` in ``report_``;
    ``score`` is the usual R^2.
    """

    def fit(self, X, y):
        x = check_series(X)
        y = check_series(y)
        self.report_ = correlation_report(x, y)
        self.coef_ = np.array([self.report_.slope])
        self.intercept_ = self.report_.intercept
        self.n_features_in_ = 1
        return self

    def predict(self, X):
        check_is_fitted(self, "report_")
        return self.coef_[0] * check_series(X) + self.intercept_
