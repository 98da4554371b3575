import pytest

from pmlink import fixtures
from pmlink.corpus import small_trees


@pytest.fixture(scope="session")
def corpus():
    """Connected negative definite trees, <= 6 vertices, framings -5..-1."""
    return small_trees(6)


@pytest.fixture
def d4():
    return fixtures.graph("d4")


# -- acceptance summary ------------------------------------------------------
# tests in test_acceptance.py are named test_c<NN>_<title>; parametrized
# cases of one criterion are folded into a single line.

_criteria: dict = {}


def _criterion(nodeid):
    if "test_acceptance.py::test_c" not in nodeid:
        return None
    name = nodeid.split("::", 1)[1].split("[", 1)[0]
    num, _, title = name[len("test_c"):].partition("_")
    return int(num), title.replace("_", " ")


_titles: dict = {}


def pytest_runtest_logreport(report):
    found = _criterion(report.nodeid)
    if found is None:
        return
    num, title = found
    _titles.setdefault(num, title)  # the first test of a criterion names it
    if report.when == "call" or report.outcome != "passed":
        ok = report.outcome == "passed"
        _criteria[num] = _criteria.get(num, True) and ok


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for num, ok in sorted(_criteria.items()):
        terminalreporter.write_line(f"criterion {num:2d}  {'PASS' if ok else 'FAIL'}  {_titles[num]}")
