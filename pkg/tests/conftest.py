from pathlib import Path

import numpy as np
import pytest

from qcsskit.constructions import make_params
from qcsskit.field import build_field

DATA = Path(__file__).parent / "data"


def load_golden(name):
    return np.loadtxt(DATA / f"{name}.txt", dtype=np.int64, ndmin=2)


@pytest.fixture(scope="session")
def ex1():
    """Cubic family over F_625 = F_5[x]/(x^4+x^3+2x^2+2), g = x."""
    return make_params("cubic", 5, 2, 26, poly=(2, 0, 2, 1, 1), g=5)


@pytest.fixture(scope="session")
def ex2():
    """Quadratic family over F_81 = F_3[x]/(x^4+x+2), chi multiplier a^2."""
    F = build_field(3, 4, poly=(2, 1, 0, 0, 1))
    return make_params("quadratic", 3, 2, 10, a=F.pow(F.x, 2), field=F)


@pytest.fixture(scope="session")
def ex3():
    return make_params("mixed", 3, 2, 10, delta=10, poly=(1, 0, 1, 1, 1), g=10)


@pytest.fixture(scope="session")
def ex4():
    return make_params("mixed0", 5, 1, 6, delta=8, poly=(3, 0, 1), g=11)


# --- acceptance summary ---------------------------------------------------------

_ACCEPTANCE = {}


def pytest_runtest_logreport(report):
    if report.when != "call" or "test_acceptance.py" not in report.nodeid:
        return
    props = dict(report.user_properties)
    if "criterion" in props:
        _ACCEPTANCE[props["criterion"]] = (report.outcome, props.get("detail", ""))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(_ACCEPTANCE):
        outcome, detail = _ACCEPTANCE[n]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {n:>2}: {verdict}  {detail}")
