import pytest

from singlab.profile_nd import shoot_solve, variational_solve
from singlab.regimes import ProblemParams

INTERVAL_CASES = [(3, 1.6), (3, 1.75), (3, 1.9), (4, 1.4)]


@pytest.fixture(scope="session")
def shot_profiles():
    return {c: shoot_solve(ProblemParams(*c)) for c in INTERVAL_CASES}


@pytest.fixture(scope="session")
def variational_profiles():
    return {c: variational_solve(ProblemParams(*c)) for c in INTERVAL_CASES}


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    """Record one PASS/FAIL line per acceptance criterion; repeated in the summary."""

    def record(number: int, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
