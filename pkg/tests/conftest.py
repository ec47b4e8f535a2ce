import numpy as np
import pytest
import scipy.sparse as sp

from klpdhg.core import Dataset, DesignMatrix

# criterion -> (passed, detail), filled in by test_acceptance.py
ACCEPTANCE_RESULTS = {}


def random_dataset(seed, m=200, n=50, sparse=False, density=0.3, k=5):
    """Gaussian design with a planted sparse signal and logistic labels."""
    rng = np.random.default_rng(seed)
    if sparse:
        A = sp.random(m, n, density=density, random_state=rng,
                      data_rvs=rng.standard_normal, format="csr")
        A = A * (1.0 / np.sqrt(density))
    else:
        A = rng.standard_normal((m, n))
    beta = np.zeros(n)
    beta[rng.choice(n, size=min(k, n), replace=False)] = rng.choice([-2.0, 2.0], size=min(k, n))
    prob = 1.0 / (1.0 + np.exp(-(A @ beta)))
    y = (rng.random(m) < prob).astype(float)
    return Dataset(DesignMatrix(A), y)


@pytest.fixture
def small_data():
    return random_dataset(0, m=60, n=12)


@pytest.fixture
def medium_data():
    return random_dataset(1)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS, key=lambda k: int(k.split()[0])):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}")
