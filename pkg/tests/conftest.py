from __future__ import annotations

import pytest

from cartansuper.cartan import build_special_model, build_witt_model
from cartansuper.superpoly import ShapeParams

DESK = ShapeParams(2, 2, (1, 1), 3)
DESK5 = ShapeParams(2, 2, (1, 1), 5)


@pytest.fixture(scope="session")
def desk():
    return DESK


@pytest.fixture(scope="session")
def S3():
    return build_special_model(DESK)


@pytest.fixture(scope="session")
def W3():
    return build_witt_model(DESK)


@pytest.fixture(scope="session")
def S5():
    return build_special_model(DESK5)


# --- acceptance summary -------------------------------------------------------------

_CRITERIA: dict[str, list[str]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    if report.when == "call" or report.outcome != "passed":
        name = report.nodeid.split("::")[1].split("[")[0]
        _CRITERIA.setdefault(name, []).append(report.outcome)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_CRITERIA):
        num, label = name.removeprefix("test_criterion_").split("_", 1)
        ok = all(o == "passed" for o in _CRITERIA[name])
        terminalreporter.write_line(f"criterion {int(num):2d} ({label}): {'PASS' if ok else 'FAIL'}")
