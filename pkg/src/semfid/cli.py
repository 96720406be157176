"""Command-line interface.

    semfid score    --captions C --detections Y9=det.jsonl --embeddings vec.txt
    semfid compare  --captions C --detections Y9=a.jsonl --detections SSD=b.jsonl --embeddings vec.txt
    semfid validate --captions C --gt-objects gt.jsonl --embeddings vec.txt
    semfid stats    --captions C --detections Y9=det.jsonl --out stats_dir/
"""

import argparse
import csv
import io
import json
import os
import sys

from semfid import __version__
from semfid._io import atomic_write_text
from semfid._validation import check_probability
from semfid.corpus import (
    best_models,
    corpus_statistics,
    load_captions_file,
    score_corpus,
    validate_corpus,
)
from semfid.detections import parse_detections
from semfid.embeddings import load_embeddings
from semfid.errors import SemFidError
from semfid.linguistics import default_lexicon, load_lexicon
from semfid.sf import Status
from semfid.stats import aggregate

UNDEFINED = "--"

SCORE_COLUMNS = (
    "image_id", "model_id", "detector_id", "sf", "s", "n_count", "o_count",
    "status", "oov_nouns", "oov_objects",
)


class UsageError(Exception):
    pass


def _num(value):
    return "" if value is None else repr(float(value))


def _csv(rows, header):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _markdown(rows, header):
    lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
    lines += ["| " + " | ".join(str(c) for c in row) + " |" for row in rows]
    return "\n".join(lines) + "\n"


def _json(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _emit(text, out):
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        atomic_write_text(out, text)


# -- input loading ---------------------------------------------------------

def _parse_detector_flags(values):
    detectors = {}
    for item in values or ():
        name, sep, path = item.partition("=")
        if not sep or not name or not path:
            raise UsageError(f"--detections expects NAME=PATH, got {item!r}")
        if name in detectors:
            raise UsageError(f"detector id {name!r} given twice")
        detectors[name] = path
    return detectors


def _load_detections(path):
    with open(path, "rb") as fh:
        return parse_detections(fh, name=path)


def _load_inputs(args, need_embeddings=True, need_detectors=True):
    captions = load_captions_file(args.captions)
    if not captions:
        raise UsageError(f"{args.captions}: no captions")
    detector_paths = _parse_detector_flags(getattr(args, "detections", None))
    if need_detectors and not detector_paths:
        raise UsageError("at least one --detections NAME=PATH is required")
    detectors = {name: _load_detections(path) for name, path in sorted(detector_paths.items())}
    table = None
    if need_embeddings:
        if not args.embeddings:
            raise UsageError("--embeddings is required")
        with open(args.embeddings, "rb") as fh:
            table = load_embeddings(fh, name=args.embeddings)
    lexicon = _load_lexicon(args)
    return captions, detectors, table, lexicon


def _load_lexicon(args):
    stop = None
    if args.stop_nouns:
        with open(args.stop_nouns, "rb") as fh:
            stop = fh.read()
    if args.lexicon:
        with open(args.lexicon, "rb") as fh:
            return load_lexicon(fh, stop)
    return default_lexicon(stop)


# -- subcommands -----------------------------------------------------------

def render_score(results, fmt, best=None):
    header = list(SCORE_COLUMNS) + (["best"] if best is not None else [])
    records = []
    for r in results:
        row = {
            "image_id": r.image_id,
            "model_id": r.model_id,
            "detector_id": r.detector_id,
            "sf": r.sf,
            "s": r.similarity,
            "n_count": r.n_count,
            "o_count": r.o_count,
            "status": str(r.status),
            "oov_nouns": r.oov_nouns,
            "oov_objects": r.oov_objects,
        }
        if best is not None:
            row["best"] = best.get((r.image_id, r.detector_id)) == r.model_id
        records.append(row)
    if fmt == "json":
        return _json(records)
    rows = []
    for row in records:
        cells = []
        for col in header:
            value = row[col]
            if col in ("sf", "s"):
                if fmt == "markdown":
                    value = UNDEFINED if value is None else f"{value:.2f}"
                else:
                    value = _num(value)
            elif col == "best":
                value = "1" if value else "0"
            cells.append(value)
        rows.append(cells)
    return _markdown(rows, header) if fmt == "markdown" else _csv(rows, header)


def cmd_score(args):
    captions, detectors, table, lexicon = _load_inputs(args)
    results = score_corpus(
        captions, detectors, table, lexicon, args.count_mode, args.min_confidence
    )
    best = best_models(results) if args.select_best else None
    _emit(render_score(results, args.format, best), args.out)


def render_compare(agg, fmt):
    if fmt == "json":
        cells = {}
        for model in agg.models:
            cells[model] = {}
            for det in agg.detectors:
                cell = agg.cell(model, det)
                cells[model][det] = {
                    "mean": cell.mean,
                    "n": cell.total,
                    "counts": {str(s): cell.counts.get(s, 0) for s in Status},
                }
        return _json({"models": agg.models, "detectors": agg.detectors, "cells": cells})
    rows = []
    for model in agg.models:
        row = [model]
        for det in agg.detectors:
            mean = agg.mean(model, det)
            if mean is None:
                row.append(UNDEFINED)
            elif fmt == "markdown":
                row.append(f"{mean:.2f}")
            else:
                row.append(repr(mean))
        rows.append(row)
    header = ["model_id"] + list(agg.detectors)
    return _markdown(rows, header) if fmt == "markdown" else _csv(rows, header)


def cmd_compare(args):
    captions, detectors, table, lexicon = _load_inputs(args)
    results = score_corpus(
        captions, detectors, table, lexicon, args.count_mode, args.min_confidence
    )
    _emit(render_compare(aggregate(results), args.format), args.out)


def render_validate(report, pairs, skipped, fmt):
    summary = dict(report.as_dict(), skipped=skipped)
    if fmt == "json":
        return _json(
            {
                "report": summary,
                "pairs": [
                    {"image_id": p.image_id, "model_id": p.model_id, "sf": p.sf, "hsf": p.hsf}
                    for p in pairs
                ],
            }
        )
    rows = [[key, repr(value) if isinstance(value, float) else value] for key, value in summary.items()]
    if fmt == "markdown":
        return _markdown(rows, ["statistic", "value"])
    return _csv(rows, ["statistic", "value"])


def render_pairs(pairs):
    rows = [
        [p.image_id, p.model_id, repr(p.sf), repr(p.hsf), p.n_count, p.gt_object_count]
        for p in pairs
    ]
    return _csv(rows, ["image_id", "model_id", "sf", "hsf", "n_count", "gt_object_count"])


def cmd_validate(args):
    if not args.gt_objects:
        raise UsageError("--gt-objects is required")
    captions, _, table, lexicon = _load_inputs(args, need_detectors=False)
    gt = _load_detections(args.gt_objects)
    report, pairs, skipped = validate_corpus(
        captions, gt, table, lexicon, args.count_mode, args.min_confidence
    )
    report_text = render_validate(report, pairs, skipped, args.format)
    pairs_text = render_pairs(pairs) if args.pairs else None
    _emit(report_text, args.out)
    if pairs_text is not None:
        atomic_write_text(args.pairs, pairs_text)


def render_stats(bundle, fmt):
    """``{filename: text}``, one file per histogram."""
    def hist_rows(hists):
        return [[src, b, hist[b]] for src, hist in hists.items() for b in sorted(hist)]

    tables = {
        "nouns_per_caption": (["model_id", "nouns", "count"], hist_rows(bundle.nouns_per_caption)),
        "caption_length": (["model_id", "tokens", "count"], hist_rows(bundle.caption_length)),
        "objects_per_image": (["detector_id", "objects", "count"], hist_rows(bundle.objects_per_image)),
        "vocabulary": (
            ["kind", "source", "unique_terms"],
            [[kind, src, n] for (kind, src), n in bundle.vocabulary.items()],
        ),
    }
    files = {}
    for name, (header, rows) in tables.items():
        if fmt == "json":
            files[name + ".json"] = _json([dict(zip(header, row)) for row in rows])
        else:
            files[name + ".csv"] = _csv(rows, header)
    return files


def cmd_stats(args):
    if not args.out:
        raise UsageError("stats needs --out DIR")
    captions, detectors, _, lexicon = _load_inputs(args, need_embeddings=False)
    bundle = corpus_statistics(captions, detectors, lexicon, args.count_mode, args.min_confidence)
    files = render_stats(bundle, "json" if args.format == "json" else "csv")
    os.makedirs(args.out, exist_ok=True)
    for name, text in files.items():
        atomic_write_text(os.path.join(args.out, name), text)


# -- argument parsing ------------------------------------------------------

def _probability(text):
    try:
        return check_probability(float(text), "--min-confidence")
    except (TypeError, ValueError) as exc:
        raise argparse.ArgumentTypeError(str(exc))


def build_parser():
    parser = argparse.ArgumentParser(
        prog="semfid", description="Reference-free Semantic Fidelity scoring for image captions."
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--captions", required=True, help="captions file (.jsonl or .csv)")
    common.add_argument("--embeddings", help="text word-vector file")
    common.add_argument("--lexicon", help="noun list, one word per line (default: bundled list)")
    common.add_argument("--stop-nouns", help="stop-noun list replacing the default positional nouns")
    common.add_argument("--min-confidence", type=_probability, default=0.0)
    common.add_argument("--count-mode", choices=("distinct", "instances"), default="distinct")
    common.add_argument("--format", choices=("csv", "json", "markdown"), default="csv")
    common.add_argument("--out", help="output path (default: stdout)")

    detections = argparse.ArgumentParser(add_help=False)
    detections.add_argument(
        "--detections", action="append", metavar="NAME=PATH", default=[],
        help="detector output in the interchange format; repeatable",
    )

    p = sub.add_parser("score", parents=[common, detections], help="per-caption SF rows")
    p.add_argument("--select-best", action="store_true", help="mark the best caption per image")
    p.set_defaults(func=cmd_score)

    p = sub.add_parser("compare", parents=[common, detections], help="mean SF per model x detector")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("validate", parents=[common], help="correlate SF with HSF on ground truth")
    p.add_argument("--gt-objects", help="ground-truth objects in the interchange format")
    p.add_argument("--pairs", help="also write per-caption (sf, hsf) pairs as CSV here")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("stats", parents=[common, detections], help="corpus histograms")
    p.set_defaults(func=cmd_stats)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except (SemFidError, UsageError, OSError, UnicodeDecodeError) as exc:
        print(f"semfid {args.command}: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
