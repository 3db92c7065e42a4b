import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def report_line():
    """Record one ``ACCEPTANCE n PASS/FAIL ...`` line; echoed in the terminal summary."""

    def emit(number, ok, text):
        line = f"ACCEPTANCE {number:>2} {'PASS' if ok else 'FAIL'} {text}"
        ACCEPTANCE_LINES.append((number, line))
        print(line)
        return ok

    return emit


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(ACCEPTANCE_LINES, key=lambda item: item[0]):
            terminalreporter.write_line(line)
