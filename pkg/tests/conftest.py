import pytest
from hypothesis import settings

from cnbs.analytic import OptionKind, OptionSpec

settings.register_profile("default", max_examples=200, deadline=None)
settings.load_profile("default")


@pytest.fixture
def call_10():
    """Call scenario: strike 10, rate 0.1, six months, vol 0.4."""
    return OptionSpec(OptionKind.CALL, 10.0, 0.1, 0.4, 0.5)


@pytest.fixture
def put_100():
    """Put scenario: strike 100, rate 0.25, one year, vol 0.3."""
    return OptionSpec(OptionKind.PUT, 100.0, 0.25, 0.3, 1.0)


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def record():
    """Collect one status line per acceptance criterion for the terminal summary."""

    def _record(label: str, ok: bool, detail: str):
        line = f"[{'PASS' if ok else 'FAIL'}] {label}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
