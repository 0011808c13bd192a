from hypothesis import HealthCheck, settings

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.filter_too_much],
)
settings.load_profile("default")

import pytest

_CRITERIA: list[str] = []


@pytest.fixture
def criterion(request):
    """report(n, ok, detail) records one acceptance line; ok=False also fails the test."""

    def report(n, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {n}: {detail}"
        _CRITERIA.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
