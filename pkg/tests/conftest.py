import numpy as np
import pytest

from ddapprox import DecisionDiagram, dense_simulate, generate_supremacy
from ddapprox.contribution import compute_contributions

import criteria


def pytest_terminal_summary(terminalreporter):
    if criteria.LINES:
        terminalreporter.section("acceptance criteria")
        for line in criteria.LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def inst4x4():
    """Frozen depth-10 grid instance, seed 0: (dense vector, DD, contributions)."""
    circuit = generate_supremacy(4, 4, 10, seed=0)
    reference = dense_simulate(circuit)
    dd = DecisionDiagram.from_statevector(reference)
    return reference, dd, compute_contributions(dd)


@pytest.fixture()
def rng():
    return np.random.default_rng(20240817)
