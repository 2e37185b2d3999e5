import pytest

ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the verdict follows the test outcome."""
    entry = {"id": request.node.name, "detail": ""}
    ACCEPTANCE.append(entry)

    def note(label, detail):
        entry["label"] = label
        entry["detail"] = detail

    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call" and "criterion" in item.fixturenames:
        for entry in ACCEPTANCE:
            if entry["id"] == item.name:
                entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for entry in ACCEPTANCE:
        verdict = "PASS" if entry.get("passed") else "FAIL"
        label = entry.get("label", entry["id"])
        terminalreporter.write_line(f"[{verdict}] {label}: {entry['detail']}")
