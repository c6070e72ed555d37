import pytest

_LINES = []


@pytest.fixture
def report():
    """Record one verdict line per acceptance criterion; echoed in the terminal summary."""

    def emit(line):
        _LINES.append(line)
        print(line)

    return emit


def pytest_terminal_summary(terminalreporter):
    if _LINES:
        terminalreporter.section("acceptance verdicts")
        for line in _LINES:
            terminalreporter.write_line(line)
