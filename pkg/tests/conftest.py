import json
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from extremal.sequence import ExtremalSequence

FIXTURES = Path(__file__).parent / "fixtures"

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def constants():
    return json.loads((FIXTURES / "constants.json").read_text())


@pytest.fixture(scope="session")
def seq12():
    seq = ExtremalSequence.fibonacci(1, 2)
    seq.extend(27)
    return seq



# (criterion number, passed, detail) rows collected by tests/test_acceptance.py
ACCEPTANCE = []


@pytest.fixture(scope="session")
def acceptance_log():
    return ACCEPTANCE


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n, ok, detail in sorted(ACCEPTANCE):
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
