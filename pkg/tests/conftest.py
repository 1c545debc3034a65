import random
from fractions import Fraction

import pytest

from pseudoquant.symcore import ChartSpec, Poly, Scalar, standard_chart


def random_poly(chart: ChartSpec, rng: random.Random, max_degree: int = 3, terms: int = 4) -> Poly:
    """Random exact polynomial in the chart coordinates (no stray hbar powers)."""
    nv = len(chart.variables)
    out = Poly.zero(chart)
    for _ in range(rng.randint(1, terms)):
        exp = [0] * nv
        for _ in range(rng.randint(0, max_degree)):
            exp[rng.randrange(1, nv)] += 1
        coeff = Scalar(
            Fraction(rng.randint(-4, 4), rng.randint(1, 3)),
            Fraction(rng.randint(-2, 2), 1),
        )
        out = out + Poly(chart, {tuple(exp): coeff})
    return out


@pytest.fixture
def pq1():
    return standard_chart(1)


@pytest.fixture
def pq2():
    return standard_chart(2)


@pytest.fixture
def ab1():
    return ChartSpec((("a1", "b1"),))


@pytest.fixture
def rng():
    return random.Random(987654321)


# One verdict line per acceptance criterion, echoed after the test summary so
# they stay visible under pytest's output capture.
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
