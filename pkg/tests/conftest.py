import pytest

from strata.degen import load_degen_catalog
from strata.golden import load_goldens


@pytest.fixture(scope="session")
def degen():
    return load_degen_catalog()


@pytest.fixture(scope="session")
def catalog(degen):
    return degen.descriptors


@pytest.fixture(scope="session")
def goldens():
    return load_goldens()


def pytest_terminal_summary(terminalreporter):
    from test_acceptance import RESULTS, format_line

    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(RESULTS):
        terminalreporter.write_line(format_line(n, *RESULTS[n]))
