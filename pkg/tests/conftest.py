import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from yangbaxter.bridge import bachiller_solution
from yangbaxter.solution import involutive_tau, validate_solution
from yangbaxter.truncated import TypeSignature, brace_of_matrix

settings.register_profile("ci", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("ci")


def cycles_to_perm(n, cycles):
    perm = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, cyc[1:] + cyc[:1]):
            perm[a] = b
    return perm


def four_point_example():
    rows = [
        cycles_to_perm(4, [(2, 3)]),
        cycles_to_perm(4, [(0, 2, 1, 3)]),
        cycles_to_perm(4, [(0, 3, 1, 2)]),
        cycles_to_perm(4, [(0, 1)]),
    ]
    sigma = np.array(rows)
    return validate_solution(sigma, involutive_tau(sigma), involutive_expected=True)


def type22(m):
    """Brace and solution for the type-(2,2) matrix with off-diagonal entry m."""
    B, x = brace_of_matrix(((2, m), (0, 2)), TypeSignature(2, (1, 1)))
    return B, x, bachiller_solution(B, x)


@pytest.fixture
def sec5():
    return four_point_example()


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
