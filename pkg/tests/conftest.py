import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from grafter.alphabet import Alphabet  # noqa: E402


@pytest.fixture(scope="session")
def leibniz():
    return Alphabet.shipped("leibniz")


@pytest.fixture(scope="session")
def cartan():
    return Alphabet.shipped("cartan")


@pytest.fixture(scope="session")
def strand():
    """One 1->1 generator and nothing else."""
    return Alphabet.parse("GENERATORS\nx: 1 -> 1\n")


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
