import pytest

_acceptance_lines = []


@pytest.fixture
def acceptance_log():
    """Recorder for per-criterion summary lines, echoed after the run."""
    return _acceptance_lines.append


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
