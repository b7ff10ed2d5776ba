import pytest

ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance line; the outcome comes from the test itself."""
    entry = {"name": request.node.name, "detail": ""}
    ACCEPTANCE.append(entry)

    def note(label, detail=""):
        entry["label"] = label
        entry["detail"] = detail

    return note


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        for entry in ACCEPTANCE:
            if entry["name"] == item.name:
                entry["passed"] = rep.passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for entry in ACCEPTANCE:
        status = "PASS" if entry.get("passed") else "FAIL"
        label = entry.get("label", entry["name"])
        terminalreporter.write_line(f"[{status}] {label}  {entry['detail']}")
