import pathlib

import pytest
from hypothesis import settings

from bigsos.speclang import parse_spec

# Exhaustive oracles in some properties are slow on CI boxes; no deadline.
settings.register_profile("bigsos", deadline=None, max_examples=60)
settings.load_profile("bigsos")

FIXTURES = pathlib.Path(__file__).parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / f"{name}.sos").read_text(encoding="utf-8")


def fixture_path(name: str) -> str:
    return str(FIXTURES / f"{name}.sos")


@pytest.fixture
def load_spec():
    def load(name: str):
        return parse_spec(fixture_text(name))
    return load


# --- acceptance reporting ------------------------------------------------------------
#
# test_acceptance.py marks each test with @pytest.mark.criterion(n, "name"); the
# terminal summary prints one pass/fail line per criterion.

_acceptance_results = {}


def pytest_configure(config):
    config.addinivalue_line(
        "markers", "criterion(num, name): acceptance criterion identity")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    num, name = marker.args
    if rep.when == "call":
        _acceptance_results[num] = (name, rep.passed, rep.duration)
    elif rep.when == "setup" and not rep.passed:
        _acceptance_results[num] = (name, False, rep.duration)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _acceptance_results:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(_acceptance_results):
        name, passed, duration = _acceptance_results[num]
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(
            f"criterion {num} ({name}): {verdict}  [{duration:.2f}s]")
