import pytest

import helpers


@pytest.fixture
def psi1():
    return helpers.PSI1


@pytest.fixture
def ex1():
    return helpers.EX1


def pytest_terminal_summary(terminalreporter):
    if not helpers.ACCEPTANCE and not helpers.DEVIATIONS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(helpers.ACCEPTANCE, key=lambda k: int(k)):
        passed, title = helpers.ACCEPTANCE[key]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} criterion {key}: {title}")
    for line in helpers.DEVIATIONS:
        terminalreporter.write_line(f"DEVIATION {line}")
