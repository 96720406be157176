from pathlib import Path

import pytest

from semfid.embeddings import EmbeddingTable

GOLDEN = Path(__file__).parent / "data" / "golden"


def pytest_addoption(parser):
    parser.addoption(
        "--vectors",
        default=None,
        help="public pretrained text vector file for the informative Table 1 agreement check",
    )


@pytest.fixture
def toy_table():
    return EmbeddingTable.from_dict({"cat": [1.0, 0.0], "dog": [0.0, 1.0]})


@pytest.fixture
def golden():
    return GOLDEN


# one PASS/FAIL line per acceptance criterion, printed after the run
_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


def pytest_runtest_makereport(item, call):
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(
        number, {"title": title, "outcomes": [], "notes": [], "verdict": None}
    )
    # informative checks report their own verdict without failing the run
    entry["verdict"] = getattr(item, "criterion_verdict", entry["verdict"])
    if call.when == "call" or (call.when == "setup" and call.excinfo is not None):
        if call.excinfo is None:
            entry["outcomes"].append("passed")
        elif call.excinfo.errisinstance(pytest.skip.Exception):
            entry["outcomes"].append("skipped")
            entry["notes"].append(str(call.excinfo.value))
        else:
            entry["outcomes"].append("failed")
    for note in getattr(item, "criterion_notes", ()):
        if note not in entry["notes"]:
            entry["notes"].append(note)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        outcomes = entry["outcomes"]
        if "failed" in outcomes:
            verdict = "FAIL"
        elif entry["verdict"]:
            verdict = entry["verdict"]
        elif outcomes and all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        line = f"criterion {number}: {verdict}  {entry['title']}"
        if entry["notes"]:
            line += "  [" + "; ".join(entry["notes"]) + "]"
        terminalreporter.write_line(line)
