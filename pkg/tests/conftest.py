import pytest

from patclir.synthetic import FIXTURE_DIR


@pytest.fixture
def fixture_dir():
    return FIXTURE_DIR


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            props = dict(getattr(rep, "user_properties", ()))
            if rep.when == "call" and "criterion" in props:
                lines.append((rep.nodeid, f"{outcome.upper():<7}{props['criterion']}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
