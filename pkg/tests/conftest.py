import pytest

_RESULTS: list[tuple[str, bool, str]] = []


class _Recorder:
    def __call__(self, criterion: str, passed: bool, detail: str = "") -> None:
        _RESULTS.append((criterion, bool(passed), detail))
        assert passed, f"criterion {criterion}: {detail}"


@pytest.fixture
def criterion():
    """Record a pass/fail line for the acceptance summary, then assert it."""
    return _Recorder()


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _RESULTS:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name:<28} {detail}")
