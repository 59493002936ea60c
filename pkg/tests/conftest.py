import numpy as np
import pytest
from hypothesis import strategies as st

from noisyrec import Experiment, Prior

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def dirichlet_experiment(seed, n):
    rng = np.random.default_rng(seed)
    return Experiment.from_rows(rng.dirichlet(np.ones(n)), rng.dirichlet(np.ones(n)))


@st.composite
def experiments(draw, max_signals=8):
    n = draw(st.integers(1, max_signals))
    seed = draw(st.integers(0, 2**32 - 1))
    return dirichlet_experiment(seed, n)


alphas = st.floats(min_value=0.01, max_value=0.49, allow_nan=False)


@pytest.fixture
def quarter():
    return Prior(0.25)


@pytest.fixture
def vertex_rows():
    # Symmetric three-signal construction at alpha = 1/4.
    return [0.5, 1 / 6, 1 / 3], [1 / 6, 0.5, 1 / 3]
