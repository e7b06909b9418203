import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import brute_canonical  # noqa: E402

from virtplane import make_system  # noqa: E402

SYSTEM_NAMES = ["binary", "natural", "prime", "fib:1"]


@pytest.fixture(scope="session")
def systems8():
    return {name: make_system(name, 8) for name in SYSTEM_NAMES}


@pytest.fixture(scope="session")
def brute_canon8(systems8):
    """{system name: {value: canonical MSB-first string}} by exhaustive search."""
    return {name: brute_canonical(list(s.weights), 255) for name, s in systems8.items()}


# one PASS/FAIL line per acceptance criterion in the terminal summary
_acceptance = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py" not in report.nodeid:
        return
    if report.when == "call" or report.outcome == "failed":
        name = report.nodeid.split("::")[-1]
        prior = _acceptance.get(name, "passed")
        _acceptance[name] = "failed" if "failed" in (prior, report.outcome) else report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in sorted(_acceptance.items()):
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
