import numpy as np
import pytest

from charvar.groups import RepresentationTuple, parse_descriptor

ACCEPTANCE_LINES: list[str] = []

UNIPOTENT = np.array([[1.0, 1.0], [0.0, 1.0]])
HYPERBOLIC = np.diag([2.0, 0.5])


@pytest.fixture
def sl2r():
    return parse_descriptor("SL2R")


@pytest.fixture
def fixture_pair(sl2r):
    """The pair (diag(2, 0.5), [[1, 1], [0, 1]]) in SL(2, R)."""
    return RepresentationTuple.from_matrices(sl2r, [HYPERBOLIC, UNIPOTENT])


@pytest.fixture
def record_criterion():
    def record(number: int, title: str, passed: bool, worst: float, bound: float):
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES.append(
            f"[{status}] criterion {number:2d}: {title} (worst {worst:.3e}, bound {bound:.1e})"
        )
        assert passed, f"criterion {number} failed: worst {worst:.3e} > {bound:.1e}"

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
