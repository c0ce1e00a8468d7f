from pathlib import Path

import numpy as np
import pytest

from hkconsensus import Graph, load_edge_list

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def path2():
    return load_edge_list("0 1")


@pytest.fixture(scope="session")
def path3():
    return load_edge_list("a b\nb c")


@pytest.fixture(scope="session")
def triangle():
    return load_edge_list("a b\nb c\nc a")


@pytest.fixture(scope="session")
def karate():
    return load_edge_list(FIXTURES / "karate.edges")


@pytest.fixture(scope="session")
def sweep_graph():
    """Dolphin network when fetched, else the committed 34-node fixture."""
    dolphins = FIXTURES / "dolphins.edges"
    if dolphins.exists():
        return load_edge_list(dolphins)
    return load_edge_list(FIXTURES / "karate.edges")


def random_connected_graph(n: int, extra_edges: int, seed: int) -> Graph:
    """Random tree plus extra edges: connected by construction, deterministic."""
    rng = np.random.default_rng(seed)
    edges = set()
    for i in range(1, n):
        j = int(rng.integers(0, i))
        edges.add((j, i))
    attempts = 0
    while len(edges) < n - 1 + extra_edges and attempts < 50 * (extra_edges + 1):
        attempts += 1
        u, v = (int(x) for x in rng.integers(0, n, size=2))
        if u == v:
            continue
        edges.add((min(u, v), max(u, v)))
    return Graph.from_edges((str(u), str(v)) for u, v in sorted(edges))


def random_regular_graph(n: int, d: int, seed: int) -> Graph:
    """Pairing-model d-regular graph; rejects self-loops and multi-edges."""
    rng = np.random.default_rng(seed)
    while True:
        stubs = np.repeat(np.arange(n), d)
        rng.shuffle(stubs)
        u, v = stubs[0::2], stubs[1::2]
        if np.any(u == v):
            continue
        a, b = np.minimum(u, v), np.maximum(u, v)
        keys = a * n + b
        if np.unique(keys).size != keys.size:
            continue
        g = Graph.from_edges((str(x), str(y)) for x, y in zip(a.tolist(), b.tolist()))
        if g.connected:
            return g
