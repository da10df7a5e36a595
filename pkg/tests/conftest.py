"""Collects acceptance-criterion outcomes and prints one line per criterion."""

from collections import OrderedDict

import pytest

_RESULTS = OrderedDict()


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(cid, title, group=None): acceptance criterion checked by this test")


@pytest.fixture
def record(request):
    """Attach a measured-value note to the current criterion line."""
    def _record(text):
        request.node.user_properties.append(("detail", text))
    return _record


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None or report.when not in ("setup", "call"):
        return
    if report.when == "setup" and report.passed:
        return
    cid, title = marker.args
    group = marker.kwargs.get("group")
    sub = item.callspec.id if hasattr(item, "callspec") else None
    details = [v for k, v in item.user_properties if k == "detail"]
    entry = _RESULTS.setdefault(cid.split(".")[0], {"title": None, "parts": []})
    if "." not in cid or group:
        entry["title"] = group or title
    entry["parts"].append((cid, title if "." in cid else sub, report.passed, details))


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for cid, entry in _RESULTS.items():
        ok = all(p[2] for p in entry["parts"])
        title = entry["title"] or entry["parts"][0][1]
        tr.write_line(f"criterion {cid:<3} {'PASS' if ok else 'FAIL'}  {title}")
        for sub_id, sub_title, passed, details in entry["parts"]:
            label = f"{sub_id} {sub_title}" if "." in sub_id else (sub_title or "")
            note = "; ".join(details)
            if len(entry["parts"]) > 1:
                tr.write_line(f"    {'pass' if passed else 'FAIL'}  {label}: {note}".rstrip(": "))
            elif note:
                tr.write_line(f"    {note}")
