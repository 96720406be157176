"""Validation statistics, aggregation tables and corpus histograms."""

import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field

import numpy as np

from semfid.errors import DegenerateInput, DomainError, LengthMismatch
from semfid.linguistics import tokenize
from semfid.sf import Status, check_count_mode

_CF_EPS = 1e-16
_CF_TINY = 1e-300
_CF_MAX_ITER = 10000
_PERFECT_FIT_EPS = 8 * np.finfo(float).eps


def _beta_cf(a, b, x):
    # modified Lentz evaluation of the continued fraction for I_x(a, b)
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise DomainError(f"continued fraction did not converge for a={a}, b={b}, x={x}")


def reg_incomplete_beta(a, b, x):
    """Regularized incomplete beta function I_x(a, b).

    Uses the continued fraction directly for x < (a + 1) / (a + b + 2) and
    the reflection I_x(a, b) = 1 - I_{1-x}(b, a) above it, where the fraction
    converges fastest.
    """
    if not (a > 0 and b > 0):
        raise DomainError(f"a and b must be positive, got a={a}, b={b}")
    if not 0.0 <= x <= 1.0:
        raise DomainError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return float(x)
    log_front = (
        math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
        + a * math.log(x) + b * math.log1p(-x)
    )
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return min(1.0, front * _beta_cf(a, b, x) / a)
    return max(0.0, 1.0 - front * _beta_cf(b, a, 1.0 - x) / b)


def _paired(x, y):
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.ndim != 1 or y.ndim != 1:
        raise ValueError("x and y must be one-dimensional")
    if x.shape != y.shape:
        raise LengthMismatch(f"series lengths differ: {x.size} vs {y.size}")
    if x.size < 3:
        raise DegenerateInput(f"need at least 3 pairs, got {x.size}")
    if not (np.all(np.isfinite(x)) and np.all(np.isfinite(y))):
        raise DegenerateInput("series contain non-finite values")
    dx = x - x.mean()
    dy = y - y.mean()
    sxx = float(dx @ dx)
    syy = float(dy @ dy)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInput("series must not be constant")
    return x, y, dx, dy, sxx, syy


def pearson_p_value(r, n):
    """Two-sided p-value for sample correlation ``r`` over ``n`` pairs.

    With t = r * sqrt((n-2) / (1-r^2)) and df = n-2 the tail probability is
    I_{df/(df+t^2)}(df/2, 1/2), and df/(df+t^2) simplifies to 1 - r^2.
    """
    if n < 3:
        raise DegenerateInput(f"need at least 3 pairs, got {n}")
    r = abs(r)
    if r >= 1.0:
        return 0.0
    return reg_incomplete_beta((n - 2) / 2.0, 0.5, (1.0 - r) * (1.0 + r))


def pearson(x, y):
    """Sample Pearson correlation; returns ``(rho, p_value, n)``."""
    x, _, dx, dy, sxx, syy = _paired(x, y)
    rho = float(dx @ dy) / math.sqrt(sxx * syy)
    # within rounding of a perfect fit, 1 - r^2 is noise: report the exact value
    if abs(rho) > 1.0 - _PERFECT_FIT_EPS:
        rho = math.copysign(1.0, rho)
    return rho, pearson_p_value(rho, x.size), int(x.size)


def linear_fit(x, y):
    """Least-squares line; returns ``(slope, intercept, r_squared)``."""
    x, y, dx, dy, sxx, syy = _paired(x, y)
    slope = float(dx @ dy) / sxx
    intercept = float(y.mean() - slope * x.mean())
    resid = y - (slope * x + intercept)
    r_squared = 1.0 - float(resid @ resid) / syy
    return slope, intercept, min(1.0, max(0.0, r_squared))


@dataclass(frozen=True)
class CorrelationReport:
    n: int
    rho: float
    p_value: float
    slope: float
    intercept: float
    r_squared: float

    def as_dict(self):
        return {
            "n": self.n,
            "rho": self.rho,
            "p_value": self.p_value,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_squared": self.r_squared,
        }


def correlation_report(x, y):
    rho, p, n = pearson(x, y)
    slope, intercept, r2 = linear_fit(x, y)
    return CorrelationReport(n, rho, p, slope, intercept, r2)


_MEAN_STATUSES = (Status.FULL, Status.SIMILARITY_ONLY)


@dataclass
class Cell:
    values: list = field(default_factory=list)
    counts: Counter = field(default_factory=Counter)

    @property
    def mean(self):
        # fsum is exactly rounded, so the mean does not depend on input order
        return math.fsum(self.values) / len(self.values) if self.values else None

    @property
    def total(self):
        return sum(self.counts.values())


@dataclass
class AggregateTable:
    """Mean sf per (model, detector); rows and columns sorted."""

    models: list
    detectors: list
    cells: dict

    def cell(self, model, detector):
        return self.cells.get((model, detector), Cell())

    def mean(self, model, detector):
        return self.cell(model, detector).mean


def aggregate(results):
    """Fold detector-tagged :class:`SFResult` rows into an :class:`AggregateTable`.

    Only ``Full`` and ``SimilarityOnly`` rows enter the mean; every status is
    counted.
    """
    cells = defaultdict(Cell)
    for res in results:
        cell = cells[(res.model_id, res.detector_id)]
        cell.counts[Status(res.status)] += 1
        if res.status in _MEAN_STATUSES:
            cell.values.append(res.sf)
    models = sorted({m for m, _ in cells})
    detectors = sorted({d for _, d in cells}, key=lambda d: (d is None, d or ""))
    return AggregateTable(models, detectors, dict(cells))


@dataclass
class HistogramBundle:
    nouns_per_caption: dict
    caption_length: dict
    objects_per_image: dict
    vocabulary: dict


def corpus_stats(captions, extractions, term_sets, count_mode="distinct"):
    """Histograms of nouns per caption, caption length and objects per image.

    ``extractions`` runs parallel to ``captions``; ``term_sets`` maps a
    detector id to ``{image_id: ObjectTermSet}``. ``vocabulary`` maps
    ``("nouns", model)`` and ``("objects", detector)`` to unique-term counts.
    """
    count_mode = check_count_mode(count_mode)
    captions = list(captions)
    extractions = list(extractions)
    if len(captions) != len(extractions):
        raise LengthMismatch("captions and extractions differ in length")
    nouns_hist = defaultdict(Counter)
    length_hist = defaultdict(Counter)
    noun_vocab = defaultdict(set)
    for cap, ext in zip(captions, extractions):
        n = len(ext.distinct_nouns) if count_mode == "distinct" else len(ext.noun_tokens)
        nouns_hist[cap.model_id][n] += 1
        length_hist[cap.model_id][len(tokenize(cap.text))] += 1
        noun_vocab[cap.model_id].update(ext.distinct_nouns)
    objects_hist = {}
    vocabulary = {("nouns", m): len(v) for m, v in sorted(noun_vocab.items())}
    for det_id in sorted(term_sets):
        hist = Counter()
        vocab = set()
        for terms in term_sets[det_id].values():
            n = len(terms.distinct_labels) if count_mode == "distinct" else terms.instance_count
            hist[n] += 1
            vocab.update(terms.distinct_labels)
        objects_hist[det_id] = hist
        vocabulary[("objects", det_id)] = len(vocab)
    return HistogramBundle(
        nouns_per_caption={k: nouns_hist[k] for k in sorted(nouns_hist)},
        caption_length={k: length_hist[k] for k in sorted(length_hist)},
        objects_per_image=objects_hist,
        vocabulary=vocabulary,
    )
