import pytest

from censorgame import UtilityParams, paper_mix

_acceptance_lines = []


@pytest.fixture(scope="session")
def mix():
    return paper_mix()


@pytest.fixture(scope="session")
def tolerant():
    return UtilityParams(c=-0.015, d=1.75, quantum=5)


@pytest.fixture(scope="session")
def intolerant():
    return UtilityParams(c=-0.015, d=0.75, quantum=5)


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    _acceptance_lines.append(f"{'PASS' if report.passed else 'FAIL'}  {name}")


def pytest_terminal_summary(terminalreporter):
    if _acceptance_lines:
        terminalreporter.section("acceptance criteria")
        for line in _acceptance_lines:
            terminalreporter.write_line(line)
