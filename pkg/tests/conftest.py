import numpy as np
import pytest

from graphsamp.graph_model import erdos_renyi, from_edge_list, gft_basis

ACCEPTANCE_KEY = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE_KEY] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)


@pytest.fixture
def acceptance_log(request):
    return request.config.stash[ACCEPTANCE_KEY]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_orthonormal(rng, n, k):
    """N x k matrix with orthonormal columns from the QR of a Gaussian matrix."""
    q, _ = np.linalg.qr(rng.standard_normal((n, k)))
    return q


def random_spd(rng, n, eps=1e-1):
    g = rng.standard_normal((n, n))
    return g @ g.T + eps * np.eye(n)


@pytest.fixture(scope="session")
def er_basis():
    return gft_basis(erdos_renyi(60, 0.2, 11))


def weighted_graph(n=64, p=0.15, seed=0):
    """Random weighted graph in the edge-list format: weights uniform in [0.05, 1]."""
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, 1)
    keep = rng.random(iu.size) < p
    w = rng.uniform(0.05, 1.0, keep.sum())
    edges = [(int(i) + 1, int(j) + 1, float(x)) for i, j, x in zip(iu[keep], ju[keep], w)]
    return from_edge_list(edges, n)
