"""Collects ``@pytest.mark.criterion(n, title)`` outcomes into a per-criterion summary."""

import pytest

_criteria = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    rep = (yield).get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or (rep.when != "call" and rep.passed):
        return
    number, title = marker.args
    entry = _criteria.setdefault(number, {"title": title, "ok": True, "notes": []})
    if rep.passed:
        for note in getattr(item, "criterion_notes", ()):
            entry["notes"].append(note)
        return
    entry["ok"] = False
    if hasattr(rep, "wasxfail"):
        label = item.callspec.id.replace("-", " ") if hasattr(item, "callspec") else item.name
        entry["notes"].append(f"{label}: expected failure ({rep.wasxfail})")
    else:
        entry["notes"].append(f"{item.name}: {rep.when} failed")


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(_criteria):
        entry = _criteria[number]
        status = "PASS" if entry["ok"] else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {entry['title']}")
        for note in dict.fromkeys(entry["notes"]):
            terminalreporter.write_line(f"              {note}")


@pytest.fixture
def note(request):
    """Attach a short measurement to the criterion summary line."""
    request.node.criterion_notes = []
    return request.node.criterion_notes.append
