"""Object-detector outputs: parsing the interchange format and building term sets.

The interchange format is JSON-lines, one object per image::

    {"image_id": "img3", "labels": ["Cellular Telephone"], "confidences": [0.71]}

A single JSON array of the same objects is accepted too.
"""

import json
import math
from dataclasses import dataclass

from semfid._io import iter_text_lines, read_text, source_name
from semfid.errors import DuplicateImage, MalformedRecord
from semfid.linguistics import normalize_label


@dataclass(frozen=True)
class DetectionSet:
    image_id: str
    labels: tuple
    confidences: tuple = None

    def __post_init__(self):
        if not self.image_id:
            raise ValueError("image_id must be nonempty")
        if self.confidences is not None and len(self.confidences) != len(self.labels):
            raise ValueError("confidences and labels differ in length")


@dataclass(frozen=True)
class ObjectTermSet:
    """Distinct normalized labels (each a tuple of tokens) plus the raw count."""

    distinct_labels: tuple
    instance_count: int

    @property
    def names(self):
        return [" ".join(term) for term in self.distinct_labels]


def _build_set(obj, where):
    source, line_no, record_no = where

    def fail(msg):
        if line_no is None:
            msg = f"record {record_no}: {msg}"
        return MalformedRecord(msg, source, line_no)

    if not isinstance(obj, dict):
        raise fail("expected a JSON object")
    image_id = obj.get("image_id")
    if not isinstance(image_id, str) or not image_id:
        raise fail("'image_id' must be a nonempty string")
    labels = obj.get("labels")
    if not isinstance(labels, list) or not all(isinstance(x, str) for x in labels):
        raise fail("'labels' must be a list of strings")
    confidences = obj.get("confidences")
    if confidences is not None:
        if not isinstance(confidences, list) or not all(
            isinstance(c, (int, float)) and not isinstance(c, bool) for c in confidences
        ):
            raise fail("'confidences' must be a list of numbers")
        if len(confidences) != len(labels):
            raise fail(
                f"{len(confidences)} confidences for {len(labels)} labels in image {image_id!r}"
            )
        if not all(math.isfinite(c) and 0.0 <= c <= 1.0 for c in confidences):
            raise fail("confidences must lie in [0, 1]")
        confidences = tuple(float(c) for c in confidences)
    return DetectionSet(image_id, tuple(labels), confidences)


def parse_detections(source, name=None):
    """Parse detections into an ordered ``{image_id: DetectionSet}`` map.

    Images with an empty label list are kept. A repeated ``image_id`` raises
    :class:`DuplicateImage`; any malformed record raises
    :class:`MalformedRecord` with its line (JSON-lines) or record index
    (JSON array).
    """
    name = name or source_name(source)
    text = read_text(source)
    stripped = text.lstrip()
    records = []
    if stripped.startswith("["):
        try:
            items = json.loads(text)
        except json.JSONDecodeError as exc:
            raise MalformedRecord(f"invalid JSON: {exc.msg}", name, exc.lineno) from None
        records = [(item, (name, None, i)) for i, item in enumerate(items)]
    else:
        for line_no, line in iter_text_lines(text):
            if not line.strip():
                continue
            try:
                item = json.loads(line)
            except json.JSONDecodeError as exc:
                raise MalformedRecord(f"invalid JSON: {exc.msg}", name, line_no) from None
            records.append((item, (name, line_no, None)))

    out = {}
    for item, where in records:
        det = _build_set(item, where)
        if det.image_id in out:
            raise DuplicateImage(det.image_id, name, where[1])
        out[det.image_id] = det
    return out


def dump_detections(sets, stream):
    """Write detection sets back out as JSON-lines."""
    for det in sets:
        obj = {"image_id": det.image_id, "labels": list(det.labels)}
        if det.confidences is not None:
            obj["confidences"] = list(det.confidences)
        stream.write(json.dumps(obj, ensure_ascii=False) + "\n")


def to_term_set(detections, min_confidence=0.0):
    """Filter by confidence, normalize and dedupe labels.

    Labels without confidences are always kept. Labels that normalize to no
    tokens at all (pure punctuation) are dropped.
    """
    labels = detections.labels
    if detections.confidences is not None:
        labels = [lab for lab, c in zip(labels, detections.confidences) if c >= min_confidence]
    distinct = {}
    count = 0
    for label in labels:
        term = tuple(normalize_label(label))
        if not term:
            continue
        count += 1
        distinct.setdefault(term, None)
    return ObjectTermSet(tuple(distinct), count)
