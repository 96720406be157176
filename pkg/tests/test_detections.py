import io
import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from semfid.detections import DetectionSet, dump_detections, parse_detections, to_term_set
from semfid.errors import DuplicateImage, MalformedRecord


def _jsonl(*records):
    return ("\n".join(json.dumps(r) for r in records) + "\n").encode()


class TestParse:
    def test_single_label(self):
        sets = parse_detections(_jsonl({"image_id": "img3", "labels": ["Cellular Telephone"]}))
        assert sets["img3"].labels == ("Cellular Telephone",)
        assert sets["img3"].confidences is None

    def test_empty_labels_kept(self):
        sets = parse_detections(_jsonl({"image_id": "art2", "labels": []}))
        assert sets["art2"].labels == ()

    def test_confidence_arity(self):
        data = _jsonl(
            {"image_id": "ok", "labels": []},
            {"image_id": "x", "labels": ["a"], "confidences": [0.9, 0.1]},
        )
        with pytest.raises(MalformedRecord) as info:
            parse_detections(io.BytesIO(data), name="det.jsonl")
        assert info.value.line_no == 2
        assert "det.jsonl" in str(info.value)

    def test_duplicate_image(self):
        data = _jsonl({"image_id": "a", "labels": []}, {"image_id": "a", "labels": ["x"]})
        with pytest.raises(DuplicateImage) as info:
            parse_detections(data, name="det.jsonl")
        assert info.value.image_id == "a" and info.value.line_no == 2

    def test_json_array(self):
        data = b'  [{"image_id": "a", "labels": ["x"]}, {"image_id": "b", "labels": []}]'
        assert list(parse_detections(data)) == ["a", "b"]

    def test_json_array_error_names_record(self):
        data = b'[{"image_id": "a", "labels": ["x"]}, {"image_id": "b", "labels": "x"}]'
        with pytest.raises(MalformedRecord, match="record 1"):
            parse_detections(data)

    @pytest.mark.parametrize(
        "line",
        [
            b"not json",
            b'{"labels": []}',
            b'{"image_id": "", "labels": []}',
            b'{"image_id": "a", "labels": [1]}',
            b'{"image_id": "a", "labels": ["x"], "confidences": ["hi"]}',
            b'{"image_id": "a", "labels": ["x"], "confidences": [1.5]}',
            b'["a"]',
        ],
    )
    def test_malformed(self, line):
        with pytest.raises(MalformedRecord):
            parse_detections(b'{"image_id": "z", "labels": []}\n' + line)

    def test_blank_lines_and_crlf(self):
        data = b'{"image_id": "a", "labels": ["x"]}\r\n\r\n{"image_id": "b", "labels": []}\r\n'
        assert list(parse_detections(data)) == ["a", "b"]

    def test_roundtrip(self):
        sets = [
            DetectionSet("a", ("Cellular Telephone", "dog"), (0.5, 0.25)),
            DetectionSet("b", (), None),
            DetectionSet("c", ("Café table",), None),
        ]
        buf = io.StringIO()
        dump_detections(sets, buf)
        again = parse_detections(buf.getvalue())
        assert list(again.values()) == sets


class TestTermSet:
    def test_table1_image1(self):
        terms = to_term_set(DetectionSet("1", ("Panelist", "Ambassador", "Furnishing")), 0)
        assert len(terms.distinct_labels) == 3 and terms.instance_count == 3

    def test_case_insensitive_dedup(self):
        terms = to_term_set(DetectionSet("1", ("dog", "Dog", "dog")), 0)
        assert terms.distinct_labels == (("dog",),) and terms.instance_count == 3

    def test_threshold(self):
        terms = to_term_set(DetectionSet("1", ("cat", "dog"), (0.9, 0.1)), 0.5)
        assert terms.names == ["cat"] and terms.instance_count == 1

    def test_threshold_is_inclusive(self):
        terms = to_term_set(DetectionSet("1", ("cat",), (0.5,)), 0.5)
        assert terms.instance_count == 1

    def test_multiword_and_separator_variants_dedupe(self):
        terms = to_term_set(DetectionSet("1", ("Dining Table", "dining_table", "dining-table")), 0)
        assert terms.names == ["dining table"] and terms.instance_count == 3


labels = st.lists(st.sampled_from(["dog", "Dog", "cat", "Safety bicycle", "safety_bicycle"]), max_size=8)


@given(labels, st.randoms())
def test_term_set_order_invariant(labs, rnd):
    shuffled = list(labs)
    rnd.shuffle(shuffled)
    a = to_term_set(DetectionSet("i", tuple(labs)), 0)
    b = to_term_set(DetectionSet("i", tuple(shuffled)), 0)
    assert set(a.distinct_labels) == set(b.distinct_labels)
    assert a.instance_count == b.instance_count
    assert a.instance_count >= len(a.distinct_labels)


@given(st.lists(st.floats(0, 1), min_size=1, max_size=8), st.floats(0, 1), st.floats(0, 1))
def test_raising_threshold_never_adds(confs, t1, t2):
    lo, hi = sorted((t1, t2))
    det = DetectionSet("i", tuple(f"l{i}" for i in range(len(confs))), tuple(confs))
    assert to_term_set(det, hi).instance_count <= to_term_set(det, lo).instance_count
