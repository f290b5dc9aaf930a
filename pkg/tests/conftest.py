import pytest

_LINES: dict = {}


@pytest.fixture
def report():
    """Record a check result so the session summary can list it."""
    def add(num: int, result):
        _LINES[num] = result.line()
        print(result.line())
        return result
    return add


def pytest_terminal_summary(terminalreporter):
    if not _LINES:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for num in sorted(_LINES):
        terminalreporter.write_line(f"criterion {num:>2}: {_LINES[num]}")
