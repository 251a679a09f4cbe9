import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from rggap.stochastic import SimConfig, run_ensemble, sample_real_eigs_batch  # noqa: E402

# fixed seed for every production-scale statistical run
SEED = 1
PRODUCTION = SimConfig(lattice_size=100_000, initial_fill=1.0, t_end=1000.0, seed=SEED, replicas=200)

# acceptance criteria register their one-line verdicts here
ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def production_coalescence():
    return run_ensemble(PRODUCTION, "coalescence")


@pytest.fixture(scope="session")
def production_annihilation():
    return run_ensemble(PRODUCTION, "annihilation")


@pytest.fixture(scope="session")
def ginibre_120():
    return sample_real_eigs_batch(120, 10_000, SEED)


@pytest.fixture(scope="session")
def ginibre_100():
    return sample_real_eigs_batch(100, 10_000, SEED)


@pytest.fixture(scope="session")
def ginibre_2():
    return sample_real_eigs_batch(2, 100_000, SEED)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
