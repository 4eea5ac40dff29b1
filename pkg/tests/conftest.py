import sys
from pathlib import Path

import pytest

from qcluster import kernels

HERE = Path(__file__).parent
FIXTURES = HERE / "fixtures"
sys.path.insert(0, str(HERE))


@pytest.fixture
def fixture_csv():
    return FIXTURES / "kev_fixture.csv"


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    """Each importable kernel module in turn (cython and/or python)."""
    return kernels.available_backends()[request.param]


# criterion number -> (status, title, detail), filled by test_acceptance.py
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        status, title, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{status}] {n:>2}. {title}: {detail}")
