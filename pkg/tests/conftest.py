import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def pytest_addoption(parser):
    parser.addoption("--run-heavy", action="store_true", help="run the m = 4, l = 2181 check")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-heavy"):
        return
    skip = pytest.mark.skip(reason="needs --run-heavy")
    for item in items:
        if "heavy" in item.keywords:
            item.add_marker(skip)


# one line per acceptance criterion, filled in by tests/test_acceptance.py
CRITERIA_RESULTS = []


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(CRITERIA_RESULTS):
        terminalreporter.write_line(line[1])
