"""Corpus-level workflows: load captions, score against several detectors,
validate against ground-truth objects."""

import csv
import io
import json
import os
from dataclasses import dataclass

from semfid._io import iter_text_lines, read_text, source_name
from semfid.detections import to_term_set
from semfid.errors import MalformedRecord, MissingDetections, NoOverlap
from semfid.linguistics import CaptionRecord, extract_nouns, tokenize
from semfid.sf import check_count_mode, hsf, score_caption, select_best
from semfid.stats import correlation_report, corpus_stats


def _caption_from(obj, name, line_no):
    if not isinstance(obj, dict):
        raise MalformedRecord("expected a JSON object", name, line_no)
    fields = {}
    for key in ("image_id", "model_id", "caption"):
        value = obj.get(key)
        if not isinstance(value, str):
            raise MalformedRecord(f"{key!r} must be a string", name, line_no)
        fields[key] = value
    if not fields["image_id"] or not fields["model_id"]:
        raise MalformedRecord("image_id and model_id must be nonempty", name, line_no)
    return CaptionRecord(fields["image_id"], fields["model_id"], fields["caption"])


def load_captions(source, fmt=None, name=None):
    """Read captions from JSON-lines or CSV (header ``image_id,model_id,caption``).

    ``fmt`` is ``"jsonl"`` or ``"csv"``; when omitted it follows the file
    extension of ``name``. A repeated (image_id, model_id) pair is an error.
    """
    name = name or source_name(source)
    if fmt is None:
        fmt = "csv" if str(name).lower().endswith(".csv") else "jsonl"
    records = []
    if fmt == "csv":
        reader = csv.DictReader(io.StringIO(read_text(source), newline=""))
        missing = {"image_id", "model_id", "caption"} - set(reader.fieldnames or ())
        if reader.fieldnames is not None and missing:
            raise MalformedRecord(f"CSV header lacks {sorted(missing)}", name, 1)
        for row in reader:
            records.append((_caption_from(row, name, reader.line_num), reader.line_num))
    elif fmt == "jsonl":
        for line_no, line in iter_text_lines(source):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"invalid JSON: {exc.msg}", name, line_no) from None
            records.append((_caption_from(obj, name, line_no), line_no))
    else:
        raise ValueError(f"unknown captions format {fmt!r}")

    seen = set()
    for cap, line_no in records:
        key = (cap.image_id, cap.model_id)
        if key in seen:
            raise MalformedRecord(
                f"duplicate caption for image {cap.image_id!r}, model {cap.model_id!r}",
                name,
                line_no,
            )
        seen.add(key)
    return [cap for cap, _ in records]


def load_captions_file(path):
    ext = os.path.splitext(os.fspath(path))[1].lower()
    fmt = "csv" if ext == ".csv" else "jsonl"
    with open(path, "rb") as fh:
        return load_captions(fh, fmt=fmt, name=os.fspath(path))


def _term_sets(detections, min_confidence):
    return {image_id: to_term_set(det, min_confidence) for image_id, det in detections.items()}


def score_corpus(captions, detectors, table, lexicon, count_mode="distinct", min_confidence=0.0):
    """Score every caption against every detector.

    ``detectors`` maps a detector id to ``{image_id: DetectionSet}``. Rows come
    back sorted by (image_id, model_id, detector_id).
    """
    count_mode = check_count_mode(count_mode)
    results = []
    for det_id, detections in detectors.items():
        terms = _term_sets(detections, min_confidence)
        for cap in captions:
            if cap.image_id not in terms:
                raise MissingDetections(
                    f"image {cap.image_id!r} has no record for detector {det_id!r}"
                )
            results.append(
                score_caption(cap, terms[cap.image_id], table, lexicon, count_mode, det_id)
            )
    results.sort(key=lambda r: (r.image_id, r.model_id, r.detector_id))
    return results


def best_models(results):
    """``{(image_id, detector_id): model_id}`` of the winning caption per group."""
    groups = {}
    for res in results:
        groups.setdefault((res.image_id, res.detector_id), []).append(res)
    best = {}
    for key, group in groups.items():
        winner = select_best(group)
        if winner is not None:
            best[key] = winner.model_id
    return best


@dataclass(frozen=True)
class ValidationPair:
    image_id: str
    model_id: str
    sf: float
    hsf: float
    n_count: int
    gt_object_count: int


def validate_corpus(captions, gt_objects, table, lexicon, count_mode="distinct", min_confidence=0.0):
    """Pair SF (ground-truth objects as detector) with HSF for every caption.

    Captions whose image is absent from ``gt_objects`` or has no ground-truth
    object are left out. Returns ``(CorrelationReport, pairs, skipped)``.
    """
    count_mode = check_count_mode(count_mode)
    terms = _term_sets(gt_objects, min_confidence)
    pairs = []
    skipped = 0
    for cap in sorted(captions, key=lambda c: (c.image_id, c.model_id)):
        gt = terms.get(cap.image_id)
        if gt is None or not gt.distinct_labels:
            skipped += 1
            continue
        res = score_caption(cap, gt, table, lexicon, count_mode, "gt")
        h = hsf(res.n_count, res.o_count, cap.image_id)
        pairs.append(ValidationPair(cap.image_id, cap.model_id, res.sf, h.hsf, h.n_count, h.gt_object_count))
    if len(pairs) < 3:
        raise NoOverlap(f"only {len(pairs)} captions align with ground-truth objects; need 3")
    report = correlation_report([p.sf for p in pairs], [p.hsf for p in pairs])
    return report, pairs, skipped


def corpus_statistics(captions, detectors, lexicon, count_mode="distinct", min_confidence=0.0):
    extractions = [extract_nouns(tokenize(cap.text), lexicon) for cap in captions]
    term_sets = {det_id: _term_sets(d, min_confidence) for det_id, d in detectors.items()}
    return corpus_stats(captions, extractions, term_sets, count_mode)
