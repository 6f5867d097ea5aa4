import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def verdict():
    """Record a one-line PASS/FAIL summary for an acceptance criterion, then assert it."""

    def record(number: int, title: str, ok: bool, detail: str) -> None:
        ACCEPTANCE_LINES[number] = f"criterion {number:2d} {'PASS' if ok else 'FAIL'}  {title}: {detail}"
        assert ok, ACCEPTANCE_LINES[number]

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
