import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from biqso import builtin_model  # noqa: E402

_criteria: dict[str, list[str]] = {}


@pytest.fixture
def rng():
    return np.random.default_rng(20240531)


@pytest.fixture(scope="session")
def ex1():
    return builtin_model("example1")


@pytest.fixture(scope="session")
def ex2():
    return builtin_model("example2")


@pytest.fixture(scope="session")
def ex3():
    return builtin_model("example3")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marks = [m.args[0] for m in item.iter_markers("acceptance")]
    if marks and (rep.when == "call" or rep.failed):
        for crit in marks:
            _criteria.setdefault(crit, []).append(rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_criteria, key=lambda c: int(c.split()[0].lstrip("AC"))):
        ok = all(o == "passed" for o in _criteria[crit])
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {crit}")
