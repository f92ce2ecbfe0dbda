import pytest

_LINES: dict[int, str] = {}


@pytest.fixture
def criterion(request):
    """Record a one-line PASS/FAIL summary for an acceptance criterion."""
    state = {}

    def report(num: int, label: str):
        state["num"], state["label"] = num, label

    yield report
    if "num" in state:
        rep = getattr(request.node, "rep_call", None)
        ok = rep is not None and rep.passed
        _LINES[state["num"]] = f"criterion {state['num']:>2}: {'PASS' if ok else 'FAIL'}  {state['label']}"


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance")
        for num in sorted(_LINES):
            terminalreporter.write_line(_LINES[num])
