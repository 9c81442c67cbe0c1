import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from colorgraph.graph import from_permutations, random_graph, supermelon

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

CORPUS_SIZE = 500  # per dimension


def make_corpus(D, size, seed):
    rng = np.random.default_rng(seed)
    return [random_graph(D, int(rng.integers(1, 9)), rng) for _ in range(size)]


@pytest.fixture(scope="session")
def corpus():
    """1000 connected closed graphs: 500 with D=3 and 500 with D=4."""
    return make_corpus(3, CORPUS_SIZE, 3) + make_corpus(4, CORPUS_SIZE, 4)


@pytest.fixture(scope="session")
def corpus_d2():
    return make_corpus(2, 200, 2)


@pytest.fixture
def melon3():
    return supermelon(3)


@pytest.fixture
def eight_vertex():
    """A connected 4-colored graph on 8 vertices with nonzero degree."""
    return from_permutations([(0, 1, 2, 3), (1, 2, 3, 0), (2, 3, 0, 1), (1, 0, 3, 2)])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
