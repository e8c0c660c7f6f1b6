"""Shared fixtures; collects one PASS/FAIL line per acceptance criterion."""

import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion(request):
    """Record ``(label, detail)`` for the terminal summary; pass/fail comes from the test outcome."""
    entry = {"label": request.node.name, "detail": ""}

    def record(label, detail=""):
        entry["label"], entry["detail"] = label, detail

    yield record
    rep = getattr(request.node, "rep_call", None)
    ok = rep is not None and rep.passed
    line = f"{'PASS' if ok else 'FAIL'}  {entry['label']}"
    if entry["detail"]:
        line += f"  ({entry['detail']})"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
