import sys
from pathlib import Path

import pytest
from hypothesis import settings

from qfourier import QParams

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

# filled by test_acceptance, printed at the end of the session
ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture(params=[0.3, 0.5, 0.7], ids=lambda q: f"q={q}")
def params(request):
    return QParams(request.param)


@pytest.fixture
def p05():
    return QParams(0.5)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
