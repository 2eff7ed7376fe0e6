import pytest

ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: call with (number, title, ok, detail)."""
    def record(number, title, ok, detail=""):
        ACCEPTANCE[number] = (title, ok, detail)
        assert ok, f"criterion {number} ({title}) failed: {detail}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(
            f"[{'PASS' if ok else 'FAIL'}] {number}. {title}" + (f" ({detail})" if detail else ""))
