import pytest

_LINES: list[str] = []


@pytest.fixture
def report():
    """Record one status line per acceptance criterion."""
    def emit(number, ok: bool, text: str, seconds: float):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {text} [{seconds:.2f}s]"
        _LINES.append(line)
        print(line)
        return ok
    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
