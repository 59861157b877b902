from collections import OrderedDict

import numpy as np
import pytest

from generators import toy_dataset, TOY_TEXT

_CRITERIA = OrderedDict()



def pytest_collection_modifyitems(items):
    for item in items:
        mark = item.get_closest_marker("criterion")
        if mark:
            item.user_properties.append(("criterion", (*mark.args, mark.kwargs.get("soft", False))))


def pytest_runtest_logreport(report):
    crit = dict(report.user_properties).get("criterion")
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        number, title, soft = crit
        entry = _CRITERIA.setdefault(number, {"title": title, "soft": soft, "outcomes": [], "notes": []})
        entry["outcomes"].append(report.outcome)
        for key, value in report.user_properties:
            if key == "note":
                entry["notes"].append(value)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        entry = _CRITERIA[number]
        outcomes = entry["outcomes"]
        if "failed" in outcomes:
            verdict = "FAIL"
        elif all(o == "skipped" for o in outcomes):
            verdict = "SKIP"
        else:
            verdict = "PASS"
        if entry["soft"] and verdict == "PASS" and any("DEVIATION" in n for n in entry["notes"]):
            verdict = "PASS (soft; deviation reported)"
        line = f"criterion {number}: {verdict}  {entry['title']}"
        for note in entry["notes"]:
            line += f"  [{note}]"
        terminalreporter.write_line(line)


@pytest.fixture
def toy():
    return toy_dataset()


@pytest.fixture
def toy_csv(tmp_path):
    p = tmp_path / "toy.csv"
    p.write_text(TOY_TEXT)
    return p


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)
